"""
Run Configuration
Command-line flags with .env fallbacks, validated against the documented safe ranges
"""

import logging
import math
import os
from dataclasses import asdict, dataclass
from typing import Dict, Mapping, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

COMMANDS = ("validate", "partition", "numeric")
QUANTITIES = ("zeta-trace", "rgflow", "qme", "sign-limit", "appendixF")
FORMATS = ("text", "json")

MAX_MODES = 8192
MAX_DEG = 8
MAX_K = 4
MAX_WHEEL_N = 6

# mode cutoff used by each numeric check when neither --modes nor LCS_MODES is set
DEFAULT_MODES = {
    "zeta-trace": MAX_MODES,
    "sign-limit": 2000,
    "rgflow": 32,
    "qme": 32,
    "appendixF": 0,
}
# degree truncation D and IR scale L per check, same fallback order
DEFAULT_DEG = {"rgflow": 4, "qme": 4}
WHEEL_SCALE = 10.0
DEFAULT_SCALE = {"appendixF": WHEEL_SCALE}

# pass thresholds of the numeric checks
RG_TOLERANCE = 1e-9
MASTER_TOLERANCE = 1e-6
WHEEL_TOLERANCE = 1e-3
# relative change under step halving above which a quadrature point is flagged
QUADRATURE_TOLERANCE = 1e-4
# relative floating-point allowance on top of the zeta-trace truncation bound
ZETA_ROUNDOFF = 1e-12
# heat-kernel eigenvalues below this count as zero when sizing the one-form window
KERNEL_FLOOR = 1e-12


class ConfigError(ValueError):
    """A parameter outside its documented range"""


@dataclass
class RunConfig:
    command: str
    algebra_path: Optional[str] = None
    which: Optional[str] = None
    modes: Optional[int] = None
    deg: int = 2
    max_k: int = 2
    wheel_n: int = 2
    epsilon: float = 1e-3
    scale: float = 1.0
    output: Optional[str] = None
    format: str = "text"
    threads: int = 4
    log_level: str = "WARNING"

    def __post_init__(self):
        self.validate()

    @property
    def mode_cutoff(self) -> int:
        if self.modes is not None:
            return self.modes
        return DEFAULT_MODES.get(self.which or "", 1)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        if self.command == "numeric" and self.which not in QUANTITIES:
            raise ConfigError(f"numeric needs one of {', '.join(QUANTITIES)}, got {self.which!r}")
        if self.command != "numeric" and not self.algebra_path:
            raise ConfigError(f"{self.command} needs --algebra")
        if self.format not in FORMATS:
            raise ConfigError(f"--format must be text or json, got {self.format!r}")
        if self.modes is not None and not 0 <= self.modes <= MAX_MODES:
            raise ConfigError(f"--modes must lie in 0..{MAX_MODES}, got {self.modes}")
        if not 0 <= self.deg <= MAX_DEG:
            raise ConfigError(f"--deg must lie in 0..{MAX_DEG}, got {self.deg}")
        if not 1 <= self.max_k <= MAX_K:
            raise ConfigError(f"--max-k must lie in 1..{MAX_K}, got {self.max_k}")
        if not 1 <= self.wheel_n <= MAX_WHEEL_N:
            raise ConfigError(f"--wheel-n must lie in 1..{MAX_WHEEL_N}, got {self.wheel_n}")
        if not self.epsilon > 0:
            raise ConfigError(f"--epsilon must be positive, got {self.epsilon}")
        if not self.scale > 0:
            raise ConfigError(f"--scale must be positive, got {self.scale}")
        if math.isfinite(self.scale) and self.epsilon >= self.scale:
            raise ConfigError(f"--epsilon must be below --scale, got ε={self.epsilon}, L={self.scale}")
        if self.threads < 1:
            raise ConfigError(f"LCS_THREADS must be ≥ 1, got {self.threads}")

    def to_dict(self) -> Dict:
        out = asdict(self)
        out["mode_cutoff"] = self.mode_cutoff
        return out


def _env(env: Mapping[str, str], name: str, cast, default):
    raw = env.get(name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"{name}={raw!r} is not a valid {cast.__name__}") from exc


def load_config(args, env: Optional[Mapping[str, str]] = None) -> RunConfig:
    """
    Build a RunConfig from parsed arguments. Flags win; unset flags fall back
    to LCS_* variables (from the environment or .env), then to defaults.
    """
    if env is None:
        load_dotenv()
        env = os.environ

    def pick(flag: str, name: str, cast, default):
        value = getattr(args, flag, None)
        return value if value is not None else _env(env, name, cast, default)

    which = getattr(args, "which", None)
    config = RunConfig(
        command=args.command,
        algebra_path=getattr(args, "algebra", None),
        which=which,
        modes=pick("modes", "LCS_MODES", int, None),
        deg=pick("deg", "LCS_DEG", int, DEFAULT_DEG.get(which, 2)),
        max_k=pick("max_k", "LCS_MAX_K", int, 2),
        wheel_n=pick("wheel_n", "LCS_WHEEL_N", int, 2),
        epsilon=pick("epsilon", "LCS_EPSILON", float, 1e-3),
        scale=pick("scale", "LCS_SCALE", float, DEFAULT_SCALE.get(which, 1.0)),
        output=getattr(args, "out", None),
        format=getattr(args, "format", None) or "text",
        threads=_env(env, "LCS_THREADS", int, 4),
        log_level=_env(env, "LOG_LEVEL", str, "WARNING").upper(),
    )
    logger.debug("run configuration: %s", config.to_dict())
    return config
