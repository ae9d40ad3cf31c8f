"""Config loader.

Reads config/app.yml at startup and exposes it as typed dataclasses.
Every other module imports from here. Nothing else reads YAML directly.

Dataclasses:
    ZetaConfig        - Euler-Maclaurin limits, error target, leading-term ladder
    SimplicialConfig  - truncation guard for Dold-Kan computations
    SweepConfig       - instance counts for the seeded property sweeps
    LoggingConfig     - level name and format string
    AppConfig         - top-level container holding all of the above
    CliConfig         - the effective run settings after env and flag overrides

Functions:
    get_config()           - AppConfig singleton
    reset_config()         - drop the singleton (tests)
    build_cli_config(...)  - merge AppConfig, ZW_DATA_DIR and explicit overrides
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import yaml
from dotenv import load_dotenv

from src.errors import ConfigError

# Config directory is always at <project_root>/config/.
# This file lives at <project_root>/src/config.py, so go up one level.
_PROJECT_ROOT = Path(__file__).parent.parent
_CONFIG_DIR = _PROJECT_ROOT / "config"

OUTPUT_FORMATS = ("text", "json", "csv")


@dataclass
class ZetaConfig:
    euler_maclaurin_terms: int  # Bernoulli correction terms M
    cutoff_n: int               # initial direct-summation cutoff N
    max_cutoff_n: int           # N is doubled up to this limit
    target_abs_error: float     # per-evaluation absolute error target
    ladder_start_exponent: int  # eps_0 = 2^-start
    ladder_step_exponent: int   # eps_{k+1} = eps_k * 2^-step
    ladder_points: int
    order_gate: float           # max distance of the fitted slope from an integer


@dataclass
class SimplicialConfig:
    truncation_guard: int  # degrees computed beyond k * len(C)


@dataclass
class SweepConfig:
    exact_sequences: int
    hodge: int
    lemma_instances: int
    complexes: int
    short_exact_sequences: int
    functional_equation_points: int
    gamma_points: int


@dataclass
class LoggingConfig:
    level: str
    format: str


@dataclass
class AppConfig:
    precision_bits: int
    tolerance: float
    seed: int
    output_format: str
    jobs: int
    data_dir: str
    zeta: ZetaConfig
    simplicial: SimplicialConfig
    sweeps: SweepConfig
    logging: LoggingConfig


@dataclass
class CliConfig:
    data_dir: Path
    precision_bits: int = 256   # working precision of every numeric evaluation
    tolerance: float = 1e-8     # gate on |log2 ratio - k|
    seed: int = 0
    output_format: str = "text"
    parallelism: int = 1        # worker processes for batch runs
    zeta: Optional[ZetaConfig] = None
    sweeps: Optional[SweepConfig] = None
    truncation_guard: int = 2
    extra: dict = field(default_factory=dict)

    def validate(self) -> "CliConfig":
        """Raise ConfigError unless the settings are usable; return self."""
        if self.precision_bits < 64:
            raise ConfigError(f"precision_bits must be >= 64, got {self.precision_bits}")
        if not 0 < self.tolerance < 0.5:
            raise ConfigError(f"tolerance must lie in (0, 0.5), got {self.tolerance}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(
                f"output_format must be one of {', '.join(OUTPUT_FORMATS)}, "
                f"got '{self.output_format}'"
            )
        if self.parallelism < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.parallelism}")
        return self


def _load_yaml(filename: str) -> dict:
    """Read a single YAML file from the config directory and return it as a dict."""
    path = _CONFIG_DIR / filename
    with open(path, "r") as f:
        return yaml.safe_load(f)


def _load_app_config() -> AppConfig:
    """Parse config/app.yml and assemble the AppConfig dataclass tree."""
    app = _load_yaml("app.yml")
    zeta = app["zeta"]
    sweeps = app["sweeps"]

    return AppConfig(
        precision_bits=int(app["precision_bits"]),
        tolerance=float(app["tolerance"]),
        seed=int(app["seed"]),
        output_format=app["output_format"],
        jobs=int(app["jobs"]),
        data_dir=str(app["data_dir"]),
        zeta=ZetaConfig(
            euler_maclaurin_terms=int(zeta["euler_maclaurin_terms"]),
            cutoff_n=int(zeta["cutoff_n"]),
            max_cutoff_n=int(zeta["max_cutoff_n"]),
            target_abs_error=float(zeta["target_abs_error"]),
            ladder_start_exponent=int(zeta["ladder_start_exponent"]),
            ladder_step_exponent=int(zeta["ladder_step_exponent"]),
            ladder_points=int(zeta["ladder_points"]),
            order_gate=float(zeta["order_gate"]),
        ),
        simplicial=SimplicialConfig(
            truncation_guard=int(app["simplicial"]["truncation_guard"]),
        ),
        sweeps=SweepConfig(
            exact_sequences=int(sweeps["exact_sequences"]),
            hodge=int(sweeps["hodge"]),
            lemma_instances=int(sweeps["lemma_instances"]),
            complexes=int(sweeps["complexes"]),
            short_exact_sequences=int(sweeps["short_exact_sequences"]),
            functional_equation_points=int(sweeps["functional_equation_points"]),
            gamma_points=int(sweeps["gamma_points"]),
        ),
        logging=LoggingConfig(
            level=app["logging"]["level"],
            format=app["logging"]["format"],
        ),
    )


# Module-level singleton, loaded on first access.
_config: Optional[AppConfig] = None


def get_config() -> AppConfig:
    """Return the loaded AppConfig, initialising it on first call."""
    global _config
    if _config is None:
        _config = _load_app_config()
    return _config


def reset_config() -> None:
    """Forget the cached AppConfig so the next get_config() re-reads the YAML."""
    global _config
    _config = None


def resolve_data_dir(explicit: Optional[str] = None) -> Path:
    """Pick the data directory: explicit flag, then ZW_DATA_DIR, then app.yml."""
    load_dotenv()
    raw = explicit or os.environ.get("ZW_DATA_DIR") or get_config().data_dir
    path = Path(raw)
    if not path.is_absolute() and not explicit:
        path = _PROJECT_ROOT / path
    return path


def build_cli_config(
    data_dir: Optional[str] = None,
    precision_bits: Optional[int] = None,
    tolerance: Optional[float] = None,
    seed: Optional[int] = None,
    output_format: Optional[str] = None,
    jobs: Optional[int] = None,
) -> CliConfig:
    """Merge app.yml defaults with the environment and explicit overrides, then validate."""
    app = get_config()
    cfg = CliConfig(
        data_dir=resolve_data_dir(data_dir),
        precision_bits=app.precision_bits,
        tolerance=app.tolerance,
        seed=app.seed,
        output_format=app.output_format,
        parallelism=app.jobs,
        zeta=app.zeta,
        sweeps=app.sweeps,
        truncation_guard=app.simplicial.truncation_guard,
    )
    overrides = {
        "precision_bits": precision_bits,
        "tolerance": tolerance,
        "seed": seed,
        "output_format": output_format,
        "parallelism": jobs,
    }
    cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg.validate()
