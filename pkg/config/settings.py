from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="ENTANGLE_",
        case_sensitive=False,
        extra="ignore",
    )

    # Frame Configuration
    frame_epsilon: float = 1e-10  # |<J>| at or below this has no rotated frame

    # Published E Table Check Configuration
    table_rel_tol: float = 5e-3
    table_abs_tol: float = 5e-4

    # Oracle Configuration
    oracle_rel_tol: float = 1e-8
    product_tol: float = 1e-10
    product_max_atoms: int = 4
    oracle_inject_fault: bool = False

    # Sweep Configuration
    xi_start: float = 0.0
    xi_stop: float = 3.0
    xi_step: float = 0.01
    sweep_jobs: int = 1

    # Output Configuration
    csv_digits: int = 17
    log_level: str = "INFO"


# Global settings instance
settings = Settings()
