from pydantic_settings import BaseSettings, SettingsConfigDict
from pathlib import Path


class Settings(BaseSettings):
    """Application settings from environment variables"""

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")

    # Project
    PROJECT_NAME: str = "pkgroupoids"
    VERSION: str = "1.0.0"
    DESCRIPTION: str = "Groupoids of transformations acting on poly-Klumpenhouwer networks"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Resource bounds
    GROUP_ORDER_CAP: int = 10_000
    ASSOCIATIVITY_EXHAUSTIVE_LIMIT: int = 1_000
    ASSOCIATIVITY_SAMPLE_SIZE: int = 200_000
    HOMSET_BRUTE_FORCE_LIMIT: int = 1_000_000
    NET_SEARCH_BOUND: int = 1_000_000
    BISECTION_ORDER_BOUND: int = 20_000

    # Randomized checks
    DEFAULT_SEED: int = 0

    # Display
    DISPLAY_FLATS: bool = False
    NORMALIZE_LABELS: bool = False

    # Data paths
    WORKSPACE_PATH: str = "fixtures/workspace.yaml"

    @property
    def workspace_file(self) -> str:
        """Get the resolved workspace descriptor path"""
        return str(Path(self.WORKSPACE_PATH).resolve())

    def validate_bounds(self) -> bool:
        """Check that every resource bound is positive"""
        bounds = [
            self.GROUP_ORDER_CAP,
            self.ASSOCIATIVITY_EXHAUSTIVE_LIMIT,
            self.ASSOCIATIVITY_SAMPLE_SIZE,
            self.HOMSET_BRUTE_FORCE_LIMIT,
            self.NET_SEARCH_BOUND,
            self.BISECTION_ORDER_BOUND,
        ]
        return all(bound > 0 for bound in bounds)


# Global settings instance
settings = Settings()


def get_settings() -> Settings:
    """Dependency to get settings instance"""
    return settings


def configure_settings(**updates) -> Settings:
    """Replace the global settings with a copy carrying per-invocation overrides"""
    global settings
    settings = settings.model_copy(update={k: v for k, v in updates.items() if v is not None})
    return settings
