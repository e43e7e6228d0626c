from pathlib import Path

import hypothesis
import numpy as np
import pytest

from pkgroupoids.core import config
from pkgroupoids.services.music_analysis import berg_classes, major_triad_classes
from pkgroupoids.services.workspace import WorkspaceService

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=5)
hypothesis.settings.register_profile("ci", max_examples=50, deadline=None)
hypothesis.settings.load_profile("ci")

WORKSPACE_FILE = Path(__file__).resolve().parents[1] / "fixtures" / "workspace.yaml"


@pytest.fixture(autouse=True)
def restore_settings():
    """configure_settings swaps the module-level instance; put the original back"""
    saved = config.settings
    yield
    config.settings = saved


@pytest.fixture(scope="session")
def workspace_path() -> str:
    return str(WORKSPACE_FILE)


@pytest.fixture(scope="session")
def workspace(workspace_path):
    return WorkspaceService().load(workspace_path)


@pytest.fixture(scope="session")
def berg():
    return berg_classes()


@pytest.fixture(scope="session")
def major():
    return major_triad_classes()
