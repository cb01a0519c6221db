"""Physical-layer model: codebooks, Q approximation, BER and channel sampling."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

P_MIN_MW = 0.1
P_MAX_MW = 2.4808
N_POWER_CODES = 94
POWER_CODE_MAX = N_POWER_CODES - 1
POWER_STEP_MW = (P_MAX_MW - P_MIN_MW) / POWER_CODE_MAX

MOD_CODE_MIN = 1
MOD_CODE_MAX = 11
M_MAX = 1024

ATTEN_MIN_DB = 0.0
ATTEN_MAX_DB = 1.0

BER_FLOOR = 1e-300


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of a radio operation."""


def _as_codes(code, lo: int, hi: int, what: str) -> np.ndarray:
    arr = np.asarray(code)
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or not np.all(arr == np.round(arr)):
            raise DomainError(f"{what} must be integral, got {code!r}")
        arr = arr.astype(np.int64)
    elif arr.dtype.kind not in "iu":
        raise DomainError(f"{what} must be an integer, got {code!r}")
    if arr.size and (arr.min() < lo or arr.max() > hi):
        raise DomainError(f"{what} out of range [{lo}, {hi}]: {code!r}")
    return arr.astype(np.int64)


def decode_power(code):
    """Map a power code in [0, 93] to milliwatts.

    The codebook is 94 evenly spaced levels from 0.1 mW to 2.4808 mW.
    Accepts a scalar or an integer array; returns the same shape.
    """
    arr = _as_codes(code, 0, POWER_CODE_MAX, "power code")
    mw = P_MIN_MW + arr * POWER_STEP_MW
    if arr.ndim == 0:
        return P_MAX_MW if int(arr) == POWER_CODE_MAX else float(mw)
    mw = np.where(arr == POWER_CODE_MAX, P_MAX_MW, mw)
    return mw


class Family(enum.Enum):
    BPSK = "BPSK"
    MPSK = "MPSK"
    MQAM = "MQAM"


@dataclass(frozen=True)
class ModulationScheme:
    family: Family
    M: int

    def __post_init__(self):
        M = self.M
        if not isinstance(M, (int, np.integer)) or M < 2 or (M & (M - 1)):
            raise DomainError(f"M must be a power of two >= 2, got {M!r}")
        if M > M_MAX:
            raise DomainError(f"M must not exceed {M_MAX}, got {M}")
        if self.family is Family.BPSK and M != 2:
            raise DomainError("BPSK has M = 2")

    @property
    def bits_per_symbol(self) -> int:
        return int(self.M).bit_length() - 1

    def __str__(self):
        if self.family is Family.BPSK:
            return "BPSK"
        suffix = "PSK" if self.family is Family.MPSK else "QAM"
        return f"{self.M}{suffix}"


def decode_modulation(code) -> ModulationScheme:
    """Code 1 is BPSK; code c >= 2 is M-QAM with M = 2**(c - 1)."""
    c = int(_as_codes(code, MOD_CODE_MIN, MOD_CODE_MAX, "modulation code"))
    if c == 1:
        return ModulationScheme(Family.BPSK, 2)
    return ModulationScheme(Family.MQAM, 2 ** (c - 1))


def bits_per_symbol(mod_code):
    """Bits carried per symbol for modulation code(s); BPSK and 2QAM both carry 1."""
    arr = _as_codes(mod_code, MOD_CODE_MIN, MOD_CODE_MAX, "modulation code")
    bits = np.maximum(arr - 1, 1)
    return int(bits) if bits.ndim == 0 else bits


def q_approx(x):
    """Closed-form approximation of the Gaussian tail function Q(x), x >= 0."""
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"q_approx is defined for x >= 0, got {x!r}")
    out = np.exp(-arr * arr / 2.0) / (1.64 * arr + np.sqrt(0.7 * arr * arr + 4.0))
    return float(out) if out.ndim == 0 else out


def _clamp_prob(p):
    return np.clip(p, BER_FLOOR, np.nextafter(1.0, 0.0))


def _ber_bpsk(snr):
    return q_approx(np.sqrt(snr))


def _ber_mpsk(M: int, snr):
    k = math.log2(M)
    return (2.0 / k) * q_approx(np.sqrt(2.0 * k * snr * math.sin(math.pi / M)))


def _ber_mqam(M: int, snr):
    k = math.log2(M)
    return (4.0 / k) * (1.0 - 1.0 / math.sqrt(M)) * q_approx(np.sqrt(3.0 * k / (M - 1) * snr))


def ber(scheme: ModulationScheme, snr):
    """Bit error probability of ``scheme`` at linear SNR ``snr`` (scalar or array).

    M = 2 QAM/PSK is routed through the BPSK expression. Output is clamped to
    (1e-300, 1).
    """
    s = np.asarray(snr, dtype=float)
    if np.any(np.isnan(s)) or np.any(s <= 0):
        raise DomainError(f"snr must be > 0, got {snr!r}")
    if scheme.family is Family.BPSK or scheme.M == 2:
        p = _ber_bpsk(s)
    elif scheme.family is Family.MPSK:
        p = _ber_mpsk(scheme.M, s)
    else:
        p = _ber_mqam(scheme.M, s)
    p = _clamp_prob(p)
    return float(p) if np.ndim(p) == 0 else p


def ber_by_code(mod_code: int, snr):
    return ber(decode_modulation(mod_code), snr)


def snr(power_mw, noise_lin):
    """Linear signal-to-noise ratio: transmit power (mW) over the linear attenuation."""
    p = np.asarray(power_mw, dtype=float)
    nz = np.asarray(noise_lin, dtype=float)
    if np.any(~(p > 0)):
        raise DomainError(f"power must be > 0 mW, got {power_mw!r}")
    if np.any(~(nz >= 1)):
        raise DomainError(f"noise_lin must be >= 1, got {noise_lin!r}")
    out = p / nz
    return float(out) if out.ndim == 0 else out


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


@dataclass(frozen=True, eq=False)
class ChannelEnvironment:
    """Per-subcarrier attenuation (dB) with the derived linear noise factor."""

    atten_db: np.ndarray
    noise_lin: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        a = np.array(self.atten_db, dtype=float, copy=True).reshape(-1)
        if a.size < 1:
            raise DomainError("an environment needs at least one subcarrier")
        if not np.all(np.isfinite(a)) or a.min() < ATTEN_MIN_DB or a.max() > ATTEN_MAX_DB:
            raise DomainError("attenuation must lie in [0, 1] dB")
        a.setflags(write=False)
        noise = db_to_linear(a)
        noise.setflags(write=False)
        object.__setattr__(self, "atten_db", a)
        object.__setattr__(self, "noise_lin", noise)

    @property
    def n(self) -> int:
        return int(self.atten_db.size)

    def __eq__(self, other):
        if not isinstance(other, ChannelEnvironment):
            return NotImplemented
        return np.array_equal(self.atten_db, other.atten_db)

    def __hash__(self):
        return hash(self.atten_db.tobytes())


def sample_environment(n: int, rng) -> ChannelEnvironment:
    """Draw i.i.d. Uniform[0, 1] dB attenuations for ``n`` subcarriers.

    ``rng`` is a ``numpy.random.Generator`` or an integer seed.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    rng = np.random.default_rng(rng)
    return ChannelEnvironment(rng.uniform(ATTEN_MIN_DB, ATTEN_MAX_DB, size=int(n)))


@dataclass(frozen=True, eq=False)
class TransmissionPlan:
    """Power and modulation code per subcarrier."""

    power: np.ndarray
    modulation: np.ndarray

    def __post_init__(self):
        p = _as_codes(np.array(self.power).reshape(-1), 0, POWER_CODE_MAX, "power code")
        m = _as_codes(np.array(self.modulation).reshape(-1), MOD_CODE_MIN, MOD_CODE_MAX, "modulation code")
        if p.shape != m.shape:
            raise DomainError("power and modulation vectors differ in length")
        if p.size < 1:
            raise DomainError("a plan needs at least one subcarrier")
        p = p.copy()
        m = m.copy()
        p.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "power", p)
        object.__setattr__(self, "modulation", m)

    @classmethod
    def from_settings(cls, settings) -> "TransmissionPlan":
        pairs = list(settings)
        return cls([p for p, _ in pairs], [m for _, m in pairs])

    @classmethod
    def uniform(cls, n: int, power: int, modulation: int) -> "TransmissionPlan":
        return cls(np.full(n, power), np.full(n, modulation))

    @property
    def n(self) -> int:
        return int(self.power.size)

    @property
    def settings(self) -> list[tuple[int, int]]:
        return list(zip(self.power.tolist(), self.modulation.tolist()))

    def __eq__(self, other):
        if not isinstance(other, TransmissionPlan):
            return NotImplemented
        return np.array_equal(self.power, other.power) and np.array_equal(
            self.modulation, other.modulation
        )

    def __hash__(self):
        return hash((self.power.tobytes(), self.modulation.tobytes()))

    def __repr__(self):
        return f"TransmissionPlan({self.settings!r})"
