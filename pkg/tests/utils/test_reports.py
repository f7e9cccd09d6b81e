import numpy as np
import pandas as pd
import pytest

from dirichlet_bounds.structures import (
    CheckResult,
    PropertyOutcome,
    RadialEigenSolution,
    VerificationReport,
    XiReport,
)
from dirichlet_bounds.utils.reports import (
    solution_header,
    write_solution,
    write_table,
    write_verification,
    write_xi_report,
    xi_report_lines,
)


@pytest.fixture
def solution():
    r = np.linspace(0.0, 0.5, 5)
    return RadialEigenSolution(
        lambda_=np.pi**2,
        r_grid=r,
        v=np.cos(np.pi * r),
        v_prime=-np.pi * np.sin(np.pi * r),
        d_tilde=1.0,
        method="shooting",
        grid_points=4,
    )


@pytest.fixture
def report():
    report = VerificationReport()
    report.add(CheckResult("main_theorem", "ling_bound", 0.5, -2e-6, True))
    report.add(
        CheckResult(
            "lichnerowicz",
            "reilly_bound",
            float("nan"),
            float("nan"),
            False,
            skipped=True,
            detail="hypotheses not met: positive_K",
        )
    )
    return report


def test_write_table_full_precision(tmp_path):
    target = tmp_path / "table.csv"
    write_table(pd.DataFrame({"name": ["third"], "value": [1.0 / 3.0]}), target.as_posix())
    text = target.read_text()
    assert text == "name,value\nthird,0.33333333333333331\n"
    assert "\r" not in text


def test_write_table_stdout(capsys):
    write_table(pd.DataFrame({"a": [1], "b": [2.5]}))
    assert capsys.readouterr().out == "a,b\n1,2.5\n"


def test_write_solution(tmp_path, solution):
    target = tmp_path / "solution.csv"
    write_solution(solution, target.as_posix())
    lines = target.read_text().splitlines()
    assert lines[0] == solution_header(solution)
    assert lines[0].startswith("# lambda=9.869604401089358")
    assert "method=shooting, grid_points=4" in lines[0]
    assert lines[1] == "r,v,v_prime"
    assert len(lines) == 2 + len(solution.r_grid)
    frame = pd.read_csv(target.as_posix(), comment="#")
    np.testing.assert_allclose(frame["r"].to_numpy(), solution.r_grid, rtol=1e-15)
    np.testing.assert_allclose(frame["v"].to_numpy(), solution.v, rtol=1e-15, atol=1e-30)


def test_write_verification_report(tmp_path, report):
    target = tmp_path / "checks.txt"
    write_verification(report, target.as_posix())
    assert target.read_text().splitlines() == [
        "main_theorem,ling_bound,0.5,pass",
        "lichnerowicz,reilly_bound,nan,skip",
    ]


def test_write_verification_csv(tmp_path, report):
    target = tmp_path / "checks.csv"
    write_verification(report, target.as_posix(), fmt="csv")
    frame = pd.read_csv(target.as_posix())
    assert list(frame["check_id"]) == ["main_theorem", "lichnerowicz"]
    assert list(frame["skipped"]) == [False, True]
    assert frame.loc[1, "detail"] == "hypotheses not met: positive_K"


def test_xi_report_writers(tmp_path):
    report = XiReport()
    report.add(PropertyOutcome("ode_residual", "xi_ode", 1e-12, 1e-9, 2001, True))
    report.add(PropertyOutcome("nonpositive", "xi_properties", 0.01, 0.0, 2001, False))
    assert xi_report_lines(report) == [
        "ode_residual,xi_ode,9.9999999999999998e-13,pass",
        "nonpositive,xi_properties,0.01,fail",
    ]
    target = tmp_path / "xi.csv"
    write_xi_report(report, target.as_posix())
    frame = pd.read_csv(target.as_posix())
    assert list(frame["passed"]) == [True, False]
    assert set(frame["grid_size"]) == {2001}
