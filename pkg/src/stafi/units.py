"""Internal unit system and physical configuration.

Everything downstream computes in micrometres / microseconds / zeptonewtons,
which keeps all quantities of this problem O(1)-O(100).  SI values are
accepted only at I/O boundaries (config files, CLI flags) and converted here.

Derived internal units:
    energy = zN*um            (1e-27 J)
    mass   = zN*us^2/um       (1e-27 kg)
    action = zN*um*us         (1e-33 J*s)
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping

# Reduced Planck constant, 1.054571817e-34 J*s expressed in zN*um*us.
# This is the single definition of hbar in the package.
HBAR = 0.1054571817

# 87Rb mass (1.4431606e-25 kg) in internal mass units of 1e-27 kg.
RB87_MASS = 144.31606

# Optical-lattice length scale used by the figure presets (um).  Named
# lattice_lambda to avoid colliding with the noise strength parameter.
LATTICE_LAMBDA_UM = 0.866

DEFAULT_OMEGA = 2.0 * math.pi * 10.0  # rad/us


class DimensionError(ValueError):
    """Raised when a conversion mixes incompatible dimensions."""


# Dimension vectors in the (length, time, force) basis; scale factors map the
# tagged unit onto the internal um/us/zN system.
_UNITS: dict[str, tuple[tuple[int, int, int], float]] = {
    "um":        ((1, 0, 0), 1.0),
    "m":         ((1, 0, 0), 1e6),
    "us":        ((0, 1, 0), 1.0),
    "s":         ((0, 1, 0), 1e6),
    "zN":        ((0, 0, 1), 1.0),
    "N":         ((0, 0, 1), 1e21),
    # mass = force*time^2/length
    "mass_internal": ((-1, 2, 1), 1.0),
    "kg":        ((-1, 2, 1), 1e27),
    # energy = force*length
    "zN*um":     ((1, 0, 1), 1.0),
    "J":         ((1, 0, 1), 1e27),
    # action = force*length*time
    "zN*um*us":  ((1, 1, 1), 1.0),
    "J*s":       ((1, 1, 1), 1e33),
}


def convert(value: float, from_unit: str, to_unit: str) -> float:
    """Convert between unit tags of the same dimension (exact power-of-ten scaling)."""
    try:
        dim_a, scale_a = _UNITS[from_unit]
    except KeyError:
        raise DimensionError(f"unknown unit tag {from_unit!r}") from None
    try:
        dim_b, scale_b = _UNITS[to_unit]
    except KeyError:
        raise DimensionError(f"unknown unit tag {to_unit!r}") from None
    if dim_a != dim_b:
        raise DimensionError(
            f"cannot convert {from_unit!r} (dimension {dim_a}) "
            f"to {to_unit!r} (dimension {dim_b})")
    return value * (scale_a / scale_b)


@dataclass(frozen=True)
class UnitSystem:
    """The fixed internal unit system; immutable and shareable."""

    length_unit: str = "um"
    time_unit: str = "us"
    force_unit: str = "zN"
    hbar: float = HBAR


UNITS = UnitSystem()


# Config-file keys (exact names of the external interface).
_CONFIG_KEYS = (
    "mass_kg", "omega_rad_per_us", "x0_um", "c_zN", "tf_us",
    "n_level", "lambda_sq_gamma_us",
)


@dataclass(frozen=True)
class PhysicalConfig:
    """Physical parameters of one interferometer run, in internal units.

    lambda_sq_gamma is the white-noise strength lambda^2*gamma.  It carries
    units of time (us): the correlation gamma*delta(t-s) must be dimensionless
    once integrated, so gamma absorbs the 1/time of the delta function.
    """

    m: float = RB87_MASS          # mass, internal units (1e-27 kg)
    omega: float = DEFAULT_OMEGA  # trap angular frequency, rad/us
    x0: float = 0.0               # potential crossing point, um (constant)
    c: float = 10.0               # unknown homogeneous force, zN
    t_f: float = 0.7              # process time, us
    n: int = 0                    # initial trap level
    lambda_sq_gamma: float = 0.0  # noise strength lambda^2*gamma, us

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"mass must be positive, got {self.m}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.t_f > 0:
            raise ValueError(f"t_f must be positive, got {self.t_f}")
        if self.n < 0 or int(self.n) != self.n:
            raise ValueError(f"n must be a non-negative integer, got {self.n}")
        if self.lambda_sq_gamma < 0:
            raise ValueError(
                f"lambda_sq_gamma must be >= 0, got {self.lambda_sq_gamma}")

    @property
    def oscillator_length(self) -> float:
        """Ground-state width sqrt(hbar/(m*omega)) in um."""
        return math.sqrt(HBAR / (self.m * self.omega))

    def with_(self, **kwargs) -> "PhysicalConfig":
        return replace(self, **kwargs)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, float]) -> "PhysicalConfig":
        """Build from config-file keys (SI mass, everything else internal)."""
        unknown = set(mapping) - set(_CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {}
        if "mass_kg" in mapping:
            kwargs["m"] = convert(float(mapping["mass_kg"]), "kg", "mass_internal")
        if "omega_rad_per_us" in mapping:
            kwargs["omega"] = float(mapping["omega_rad_per_us"])
        if "x0_um" in mapping:
            kwargs["x0"] = float(mapping["x0_um"])
        if "c_zN" in mapping:
            kwargs["c"] = float(mapping["c_zN"])
        if "tf_us" in mapping:
            kwargs["t_f"] = float(mapping["tf_us"])
        if "n_level" in mapping:
            kwargs["n"] = int(float(mapping["n_level"]))
        if "lambda_sq_gamma_us" in mapping:
            kwargs["lambda_sq_gamma"] = float(mapping["lambda_sq_gamma_us"])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | Path) -> "PhysicalConfig":
        return cls.from_mapping(parse_config_text(Path(path).read_text()))

    def to_mapping(self) -> dict[str, float]:
        return {
            "mass_kg": convert(self.m, "mass_internal", "kg"),
            "omega_rad_per_us": self.omega,
            "x0_um": self.x0,
            "c_zN": self.c,
            "tf_us": self.t_f,
            "n_level": self.n,
            "lambda_sq_gamma_us": self.lambda_sq_gamma,
        }


def parse_config_text(text: str) -> dict[str, str]:
    """Parse `key = value` lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, val = line.partition("=")
        else:
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
            key, val = parts
        out[key.strip()] = val.strip()
    return out


def config_hash(cfg: PhysicalConfig) -> str:
    """Stable short hash of a configuration, for provenance headers."""
    canon = ",".join(f"{k}={cfg.to_mapping()[k]!r}" for k in _CONFIG_KEYS)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]
