"""Run configuration for the p-canonical basis engine."""

import json
import os
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List

from sympy import isprime

import config as constants
from .errors import ConfigurationError


@dataclass
class RunConfig:
    """Everything a `compute` (or other) run depends on."""
    system: str = "B2"             # Named type ("B2", "A1xA1") or path to a realization JSON
    primes: List[int] = field(default_factory=lambda: list(constants.DEFAULT_PRIMES))
    maxlen: int = constants.DEFAULT_MAXLEN
    format: str = constants.DEFAULT_FORMAT   # json | text
    cache_dir: str = constants.DEFAULT_CACHE_DIR
    use_cache: bool = True
    verify: bool = False           # Cross-check engines and run the property suite
    parallelism: int = 1           # Worker processes (one prime per worker)
    engine: str = "auto"           # auto | nilhecke | localization
    rex_policy: str = "lex"        # Braid-move route preference for light leaves
    only_differences: bool = False # Text output lists only p b_x != kl_x
    log_level: str = constants.DEFAULT_LOG_LEVEL

    def validate(self) -> "RunConfig":
        """Check field invariants, raising ConfigurationError on the first failure."""
        if self.maxlen < 0:
            raise ConfigurationError(f"maxlen must be non-negative, got {self.maxlen}")
        if len(set(self.primes)) != len(self.primes):
            raise ConfigurationError(f"primes must be distinct, got {self.primes}")
        for p in self.primes:
            if p != 0 and not isprime(p):
                raise ConfigurationError(f"{p} is neither 0 nor a prime")
        if self.format not in constants.OUTPUT_FORMATS:
            raise ConfigurationError(f"unknown format '{self.format}'")
        if self.engine not in constants.ENGINES:
            raise ConfigurationError(f"unknown engine '{self.engine}'")
        if self.rex_policy not in constants.REX_POLICIES:
            raise ConfigurationError(f"unknown rex policy '{self.rex_policy}'")
        if self.parallelism < 1:
            raise ConfigurationError("parallelism must be at least 1")
        return self

    def resolved_cache_dir(self) -> str:
        """Cache directory, with the environment variable taking precedence."""
        return os.environ.get(constants.CACHE_ENV_VAR) or self.cache_dir

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_json(cls, path: str) -> "RunConfig":
        """Load a run file; unknown keys are rejected."""
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown run-file keys: {sorted(unknown)}")
        return cls(**data).validate()


# Create default instance
run_config = RunConfig()
