import math
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.special import logsumexp

from .errors import check_quantum_numbers

NORM_TOLERANCE = 1e-12
_LN2 = math.log(2.0)


def _frozen_array(value, dtype) -> np.ndarray:
    array = np.array(value, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


class SpinSector(BaseModel):
    """Symmetric sector j = N/2; 2j is stored so half-integer j stays exact."""

    model_config = ConfigDict(frozen=True)

    two_j: int = Field(ge=0)

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def n_atoms(self) -> int:
        return self.two_j

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def two_m_values(self) -> Tuple[int, ...]:
        # basis order m = -j ... +j
        return tuple(range(-self.two_j, self.two_j + 1, 2))

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(-self.two_j, self.two_j + 1, 2) / 2

    def index_of(self, two_m: int) -> int:
        check_quantum_numbers(self.two_j, two_m)
        return (two_m + self.two_j) // 2


class CollectiveState(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sector: SpinSector
    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _as_complex(cls, value):
        return _frozen_array(value, np.complex128)

    @model_validator(mode="after")
    def _check_shape_and_norm(self):
        if self.amplitudes.shape != (self.sector.dim,):
            raise ValueError(
                f"expected {self.sector.dim} amplitudes, got shape {self.amplitudes.shape}"
            )
        norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"state is not normalized: norm^2 = {norm!r}")
        return self


class SpinOperator(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sector: SpinSector
    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _as_complex(cls, value):
        return _frozen_array(value, np.complex128)

    @model_validator(mode="after")
    def _check_shape(self):
        dim = self.sector.dim
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {self.matrix.shape}")
        return self

    def is_hermitian(self, tol: float = 1e-14) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0) <= tol)


class MomentTable(BaseModel):
    """First moments and symmetrized second moments of the collective spin."""

    model_config = ConfigDict(frozen=True)

    jx: float
    jy: float
    jz: float
    jx2: float
    jy2: float
    jz2: float
    xy_sym: float
    xz_sym: float
    yz_sym: float

    def casimir(self) -> float:
        return self.jx2 + self.jy2 + self.jz2


class LogScaled(BaseModel):
    """A real number held as sign, a binary exponent and the natural log of the mantissa.

    The magnitude is 2**exp2 * exp(log_mant) with log_mant in [0, ln 2).
    """

    model_config = ConfigDict(frozen=True)

    sign: Literal[-1, 0, 1]
    log_mant: float = -math.inf
    exp2: int = 0

    @property
    def log_mag(self) -> float:
        if self.sign == 0:
            return -math.inf
        return self.log_mant + self.exp2 * _LN2

    @classmethod
    def zero(cls) -> "LogScaled":
        return cls(sign=0)

    @classmethod
    def _normalized(cls, sign: int, log_mant: float, exp2: int) -> "LogScaled":
        if sign == 0 or log_mant == -math.inf:
            return cls.zero()
        shift = math.floor(log_mant / _LN2)
        if shift:
            log_mant -= shift * _LN2
            exp2 += shift
        return cls(sign=sign, log_mant=log_mant, exp2=exp2)

    @classmethod
    def from_real(cls, value: float) -> "LogScaled":
        if value == 0:
            return cls.zero()
        mantissa, exponent = math.frexp(abs(value))
        sign = 1 if value > 0 else -1
        return cls(sign=sign, log_mant=math.log(2.0 * mantissa), exp2=exponent - 1)

    @classmethod
    def from_log(cls, log_mag: float, sign: int = 1) -> "LogScaled":
        return cls._normalized(sign, float(log_mag), 0)

    @classmethod
    def from_int_ratio(cls, num: int, den: int, sign: int = 1) -> "LogScaled":
        """sign * num / den for positive integers of any size, rounded once."""
        if num == 0:
            return cls.zero()
        # 64-bit quotient; the binary exponent carries the rest exactly
        shift = 64 - (num.bit_length() - den.bit_length())
        if shift >= 0:
            quotient = (num << shift) // den
        else:
            quotient = num // (den << -shift)
        mantissa, exponent = math.frexp(float(quotient))
        return cls(sign=sign, log_mant=math.log(2.0 * mantissa), exp2=exponent - 1 - shift)

    @classmethod
    def sum(cls, terms: Sequence["LogScaled"]) -> "LogScaled":
        live = [t for t in terms if t.sign != 0]
        if not live:
            return cls.zero()
        base = max(t.exp2 for t in live)
        logs = np.array([t.log_mant + (t.exp2 - base) * _LN2 for t in live])
        signs = np.array([t.sign for t in live], dtype=float)
        with np.errstate(divide="ignore"):
            log_mag, sign = logsumexp(logs, b=signs, return_sign=True)
        if sign == 0 or not np.isfinite(log_mag):
            return cls.zero()
        return cls._normalized(int(sign), float(log_mag), base)

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.ldexp(math.exp(self.log_mant), self.exp2)

    def __mul__(self, other: "LogScaled") -> "LogScaled":
        if self.sign == 0 or other.sign == 0:
            return LogScaled.zero()
        return LogScaled._normalized(
            self.sign * other.sign, self.log_mant + other.log_mant, self.exp2 + other.exp2
        )

    def __truediv__(self, other: "LogScaled") -> "LogScaled":
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogScaled")
        if self.sign == 0:
            return LogScaled.zero()
        return LogScaled._normalized(
            self.sign * other.sign, self.log_mant - other.log_mant, self.exp2 - other.exp2
        )

    def __add__(self, other: "LogScaled") -> "LogScaled":
        return LogScaled.sum([self, other])

    def __neg__(self) -> "LogScaled":
        if self.sign == 0:
            return self
        return self.model_copy(update={"sign": -self.sign})


class SeriesBundle(BaseModel):
    """Delta, eta, Gamma and the xi-derivatives of Delta at one (j, m, xi)."""

    model_config = ConfigDict(frozen=True)

    delta: LogScaled
    eta: LogScaled
    gamma: LogScaled
    d_delta: LogScaled
    d2_delta: LogScaled
    gamma_over_delta: float


class FrameAngles(BaseModel):
    model_config = ConfigDict(frozen=True)

    theta: float
    phi: float


SqueezingStatus = Literal["none", "x", "y"]


class EntanglementReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    var_xp: float
    var_yp: float
    corr_x: float
    corr_y: float
    e_param: float = Field(ge=0.0)
    xi_rx: float
    xi_ry: float
    mean_spin_mag: float
    angles: FrameAngles
    n_atoms: int
    squeezing: SqueezingStatus = "none"
    entangled_without_squeezing: bool = False


class SqueezedVacuumParams(BaseModel):
    """One point (N, m, xi) of the squeezed-vacuum driven state."""

    model_config = ConfigDict(frozen=True)

    n_atoms: int = Field(ge=1)
    two_m: int
    xi: float = Field(ge=0.0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_m(self):
        check_quantum_numbers(self.n_atoms, self.two_m)
        return self

    @property
    def two_j(self) -> int:
        return self.n_atoms

    @property
    def j(self) -> float:
        return self.n_atoms / 2

    @property
    def m(self) -> float:
        return self.two_m / 2


class ProductSpaceState(BaseModel):
    """State of N <= 4 distinguishable two-level atoms; bit 0 is spin up."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n_atoms: int = Field(ge=1)
    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _as_complex(cls, value):
        return _frozen_array(value, np.complex128)

    @model_validator(mode="after")
    def _check_shape_and_norm(self):
        if self.amplitudes.shape != (2 ** self.n_atoms,):
            raise ValueError(
                f"expected {2 ** self.n_atoms} amplitudes, got shape {self.amplitudes.shape}"
            )
        norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"product state is not normalized: norm^2 = {norm!r}")
        return self


SweepMode = Literal["closed-form", "oracle", "both"]


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_values: List[int] = Field(min_length=1)
    two_m_values: Optional[List[int]] = None  # None means every allowed m
    xi_values: List[float] = Field(min_length=1)
    mode: SweepMode = "closed-form"
    output: Optional[str] = None
    jobs: int = Field(default=1, ge=1)
    skip_degenerate: bool = False


class SweepRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_atoms: int
    two_m: int
    xi: float
    var_xp: float
    var_yp: float
    corr_x: float
    corr_y: float
    e_param: float
    xi_rx: float
    xi_ry: float
    mean_spin_mag: float


SWEEP_COLUMNS = list(SweepRow.model_fields)


class PointResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    params: SqueezedVacuumParams
    row: Optional[SweepRow] = None
    degenerate: bool = False
    discrepancy: Optional[float] = None


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)
