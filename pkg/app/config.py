import logging

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="SPHEREMIX_",
        env_file=".env",
        env_file_encoding="utf-8",
    )

    threads: int = Field(default=1, ge=1)
    epsilon: float = Field(default=1e-9, gt=0)
    grid_gamma: int = Field(default=256, ge=2)
    grid_r: int = Field(default=256, ge=2)
    refine: bool = True
    plancherel_terms: int = Field(default=20, ge=1)
    plancherel_radii: int = Field(default=512, ge=2)
    direct_degree_floor: int = Field(default=10_000, ge=10)
    max_degree: int = Field(default=1_000_000, ge=10)
    log_level: str = "WARNING"

    @model_validator(mode="after")
    def _check_consistency(self):
        if self.max_degree < self.direct_degree_floor:
            raise ValueError("max_degree must be at least direct_degree_floor")
        level = self.log_level.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log_level: {self.log_level}")
        self.log_level = level
        return self


settings = Settings()
