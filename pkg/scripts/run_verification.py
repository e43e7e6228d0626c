#!/usr/bin/env python3
"""
Verification runner for pkgroupoids.
Runs every battery against the shipped workspace and prints a detailed report.
"""

import sys
import argparse
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from pkgroupoids.core.config import configure_settings, get_settings  # noqa: E402
from pkgroupoids.core.exceptions import PKGroupoidError  # noqa: E402
from pkgroupoids.models.reports import VerificationReport  # noqa: E402
from pkgroupoids.services.verification import VerificationSuite, get_verification_service  # noqa: E402
from pkgroupoids.services.workspace import get_workspace_service  # noqa: E402

SUITE_ICONS = {
    VerificationSuite.GROUPS.value: "🧮",
    VerificationSuite.FUNCTOR_GROUPOID.value: "🎼",
    VerificationSuite.SUBGROUPOID.value: "🔗",
    VerificationSuite.BISECTIONS.value: "🔀",
}


def run_comprehensive_verification(config: Optional[str], suite: str, seed: Optional[int]) -> Dict[str, Any]:
    """Load the workspace and run the selected suites"""
    workspace = get_workspace_service().load(config)
    if seed is not None:
        configure_settings(DEFAULT_SEED=seed)
    report = get_verification_service(workspace).run(suite)
    return {
        "timestamp": datetime.now().isoformat(),
        "workspace": workspace.source or "built-ins only",
        "report": report,
    }


def print_detailed_report(results: Dict[str, Any]):
    """Print detailed verification report"""
    report: VerificationReport = results["report"]
    print("\n" + "=" * 80)
    print("  DETAILED VERIFICATION REPORT")
    print("=" * 80)
    print(f"Timestamp: {results['timestamp']}")
    print(f"Workspace: {results['workspace']}")
    print(f"Seed: {report.seed}")
    print()

    overall_status = "🟢 ALL PROPERTIES HOLD" if report.passed else "🟡 FAILURES DETECTED"
    print(f"Overall Status: {overall_status}")
    print()

    for suite in report.suites:
        icon = SUITE_ICONS.get(suite.suite, "•")
        print(f"{icon} {suite.suite.upper()}")
        print("-" * 40)
        print(f"Status: {'passed' if suite.passed else 'FAILED'}")
        print(f"Elapsed: {suite.elapsed}")
        passed = sum(1 for check in suite.checks if check.passed)
        print(f"Checks: {passed}/{len(suite.checks)}")
        for check in suite.checks:
            if not check.passed:
                print(f"  ❌ {check.name}: {check.detail}")
                if check.witness is not None:
                    print(f"     witness: {check.witness}")
        print()

    print("=" * 80)


def main():
    parser = argparse.ArgumentParser(description="pkgroupoids verification runner")
    parser.add_argument("--config", help="Workspace descriptor (default: settings.WORKSPACE_PATH)")
    parser.add_argument(
        "--suite",
        choices=[suite.value for suite in VerificationSuite],
        default=VerificationSuite.ALL.value,
        help="Suite to run",
    )
    parser.add_argument("--seed", type=int, help="Seed for randomized groupoids")
    parser.add_argument("--summary-only", action="store_true", help="Show only the overall status")
    args = parser.parse_args()

    settings = get_settings()
    logging.basicConfig(level=logging.WARNING, format=settings.LOG_FORMAT)

    try:
        results = run_comprehensive_verification(args.config, args.suite, args.seed)
        report: VerificationReport = results["report"]

        if args.summary_only:
            if report.passed:
                print("✅ Verification Status: ALL PROPERTIES HOLD")
                sys.exit(0)
            else:
                print("⚠️ Verification Status: FAILURES DETECTED")
                sys.exit(1)
        else:
            print_detailed_report(results)
            sys.exit(0 if report.passed else 1)

    except KeyboardInterrupt:
        print("\n⏹️ Verification interrupted by user")
        sys.exit(0)

    except PKGroupoidError as e:
        print(f"❌ Verification could not start: {e.message}")
        sys.exit(e.exit_code)


if __name__ == "__main__":
    main()
