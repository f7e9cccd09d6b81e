"""
Writers for the CSV tables and the line oriented check reports. Every writer
takes an optional destination: a local path or any URL ``smart_open``
understands, or ``None`` for stdout.
"""
import sys

from contextlib import contextmanager
from typing import Iterable, Optional

import pandas as pd

from smart_open import open as smart_open

from dirichlet_bounds.const import CSV_FLOAT_FORMAT
from dirichlet_bounds.structures import RadialEigenSolution, VerificationReport, XiReport


@contextmanager
def _destination(dest: Optional[str]):
    if dest is None:
        yield sys.stdout
        return
    with smart_open(dest, "w", newline="") as fout:
        yield fout


def write_table(frame: pd.DataFrame, dest: Optional[str] = None):
    """Comma separated, header row, LF line endings, 17 significant digits."""
    with _destination(dest) as fout:
        frame.to_csv(fout, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def write_lines(lines: Iterable[str], dest: Optional[str] = None):
    with _destination(dest) as fout:
        for line in lines:
            fout.write(line + "\n")


def solution_header(solution: RadialEigenSolution) -> str:
    return (
        f"# lambda={solution.lambda_:.17g}, d_tilde={solution.d_tilde:.17g}, "
        f"method={solution.method}, grid_points={solution.grid_points}"
    )


def write_solution(solution: RadialEigenSolution, dest: Optional[str] = None):
    """Header comment with lambda, d_tilde, method and grid size, then r, v, v_prime."""
    with _destination(dest) as fout:
        fout.write(solution_header(solution) + "\n")
        solution.to_dataframe().to_csv(
            fout, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"
        )


def write_verification(
    report: VerificationReport, dest: Optional[str] = None, fmt: str = "report"
):
    if fmt == "csv":
        write_table(report.to_dataframe(), dest)
    else:
        write_lines(report.to_lines(), dest)


def xi_report_lines(report: XiReport) -> list:
    """One property per line: id, equation tag, residual, pass or fail."""
    return [
        f"{p.property_id},{p.equation_tag},{p.max_residual:.17g},"
        f"{'pass' if p.passed else 'fail'}"
        for p in report.properties
    ]


def write_xi_report(report: XiReport, dest: Optional[str] = None, fmt: str = "csv"):
    if fmt == "csv":
        write_table(report.to_dataframe(), dest)
    else:
        write_lines(xi_report_lines(report), dest)
