import pytest

from pkgroupoids.core.exceptions import ResourceBoundError, VerificationFailure
from pkgroupoids.services.verification import VerificationService, VerificationSuite, run_check
from pkgroupoids.services.workspace import WorkspaceService


@pytest.mark.parametrize(
    "suite",
    [
        VerificationSuite.GROUPS,
        VerificationSuite.FUNCTOR_GROUPOID,
        VerificationSuite.SUBGROUPOID,
        VerificationSuite.BISECTIONS,
    ],
)
def test_suites_pass_on_shipped_workspace(workspace, suite):
    report = VerificationService(workspace).run(suite)
    failed = [(c.name, c.detail, c.witness) for s in report.suites for c in s.checks if not c.passed]
    assert failed == []
    assert report.passed
    assert [s.suite for s in report.suites] == [suite.value]


def test_report_carries_seed():
    report = VerificationService().run(VerificationSuite.GROUPS, seed=5)
    assert report.seed == 5


def test_corrupted_group_is_located():
    workspace = WorkspaceService().load_data(
        {"groups": [{"name": "Broken", "kind": "table", "order": 2, "multiply": [0, 1, 1, 1]}]}
    )
    checks = {c.name: c for c in VerificationService(workspace).groups_suite()}
    broken = checks["workspace_group:Broken"]
    assert not broken.passed
    assert broken.witness == "1 has no two-sided inverse"
    assert checks["ti_group_axioms"].passed


def test_corrupted_category_is_located():
    workspace = WorkspaceService().load_data(
        {"categories": [{"name": "Loop", "objects": ["a"], "morphisms": [{"id": "x", "src": "a", "tgt": "a"}]}]}
    )
    checks = {c.name: c for c in VerificationService(workspace).groups_suite()}
    loop = checks["workspace_category:Loop"]
    assert not loop.passed
    assert loop.witness == "x ∘ x is missing"


def test_run_check_reports_errors_as_failures():
    def bounded():
        raise ResourceBoundError("too big", witness=7)

    def failing():
        raise VerificationFailure("square does not commute", witness="f")

    result = run_check("bounded", bounded)
    assert not result.passed and result.witness == 7
    assert result.detail.startswith("resource bound")
    assert run_check("failing", failing).witness == "f"
    assert run_check("plain", lambda: True).passed
    assert run_check("tuple", lambda: (False, "why", [1])).witness == [1]


def test_berg_check_covers_every_step(monkeypatch):
    from pkgroupoids.services import verification

    checks = {c.name: c for c in VerificationService().functor_groupoid_suite()}
    assert checks["berg_analysis"].passed
    assert checks["berg_analysis"].detail.count("^{") == 7

    expected = list(verification.BERG_STEPS)
    expected[2] = ("^{VU}T2", ("T2", "T-3", "T-1"))
    monkeypatch.setattr(verification, "BERG_STEPS", expected)
    check = {c.name: c for c in VerificationService().functor_groupoid_suite()}["berg_analysis"]
    assert not check.passed
    assert check.witness[2] == ("^{VU}T2", ("T2", "T-3", "T-2"))
