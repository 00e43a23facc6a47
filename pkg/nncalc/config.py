"""Runtime settings"""
from __future__ import annotations
import logging
import os
from typing import Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field

from .constants import (
    DEFAULT_MAX_DIM,
    DEFAULT_MAX_DOUBLINGS,
    DEFAULT_MAX_WEIGHTS,
    DEFAULT_WORKERS,
    ENV_MAX_DIM,
    ENV_MAX_DOUBLINGS,
    ENV_MAX_WEIGHTS,
    ENV_WORKERS,
)

logger = logging.getLogger(__name__)

_ENV_FIELDS = {
    'max_dim': ENV_MAX_DIM,
    'max_weights': ENV_MAX_WEIGHTS,
    'max_doublings': ENV_MAX_DOUBLINGS,
    'workers': ENV_WORKERS,
}


class Settings(BaseModel):
    """
    Limits applied to inversion builds and verification sweeps.
    Every field can be overridden from the environment, see `Settings.from_env`.
    """

    model_config = ConfigDict(frozen=True)

    max_dim: int = Field(DEFAULT_MAX_DIM, ge=1)
    max_weights: int = Field(DEFAULT_MAX_WEIGHTS, ge=1)
    max_doublings: int = Field(DEFAULT_MAX_DOUBLINGS, ge=1)
    workers: int = Field(DEFAULT_WORKERS, ge=1)

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> 'Settings':
        """
        Build settings from environment variables, unset variables keep their defaults
        :param environ: mapping to read from, defaults to os.environ
        :return:
        """
        environ = os.environ if environ is None else environ
        values = {
            field: environ[name]
            for field, name in _ENV_FIELDS.items()
            if environ.get(name, '').strip()
        }
        if values:
            logger.info('settings overridden from environment: %s', sorted(values))
        return cls.model_validate(values)


def get_settings(settings: Optional[Settings] = None) -> Settings:
    """Return the given settings or the environment settings"""
    return settings if settings is not None else Settings.from_env()
