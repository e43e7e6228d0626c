from pkgroupoids.core import config
from pkgroupoids.core.config import Settings, configure_settings, get_settings
from pkgroupoids.core.exceptions import (
    DescriptorError,
    InputError,
    NoTransportError,
    PKGroupoidError,
    ResourceBoundError,
    VerificationFailure,
)


def test_defaults():
    settings = Settings(_env_file=None)
    assert settings.PROJECT_NAME == "pkgroupoids"
    assert settings.DEFAULT_SEED == 0
    assert settings.validate_bounds()


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("NET_SEARCH_BOUND", "42")
    monkeypatch.setenv("DISPLAY_FLATS", "true")
    settings = Settings(_env_file=None)
    assert settings.NET_SEARCH_BOUND == 42
    assert settings.DISPLAY_FLATS is True


def test_configure_settings_ignores_unset_values():
    before = get_settings()
    after = configure_settings(DEFAULT_SEED=9, NET_SEARCH_BOUND=None)
    assert after is config.settings
    assert after.DEFAULT_SEED == 9
    assert after.NET_SEARCH_BOUND == before.NET_SEARCH_BOUND


def test_non_positive_bounds_fail_validation():
    assert not configure_settings(BISECTION_ORDER_BOUND=0).validate_bounds()


def test_exit_codes():
    assert PKGroupoidError("x").exit_code == 1
    assert VerificationFailure("x").exit_code == 1
    assert DescriptorError("x").exit_code == 2
    assert isinstance(DescriptorError("x"), InputError)
    assert ResourceBoundError("x").exit_code == 3
    assert NoTransportError("x", witness=(1, 2)).witness == (1, 2)
    assert NoTransportError("x").exit_code == 4
