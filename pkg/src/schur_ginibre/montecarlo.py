"""Monte Carlo estimates over sampled real Ginibre matrices.

Samples are generated in fixed blocks of :data:`BLOCK_SIZE`; block ``b`` draws
from ``numpy.random.default_rng([seed, b])``, so sample ``i`` depends only on
``(seed, i)``. Per-block statistics are merged in block order, which makes
every estimate bit-identical regardless of how many worker threads ran.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy import special

from .partitions import Partition
from .symfunc import schur_batch

log = logging.getLogger(__name__)

BLOCK_SIZE = 4096
CONJUGATE_TOL = 1e-8
MIN_SAMPLES = 100
THREADS_ENV = "SCHUR_GINIBRE_THREADS"


class ConvergenceFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectrumSample:
    eigenvalues: np.ndarray
    source_seed: int = 0

    def is_conjugate_closed(self, tol: float = CONJUGATE_TOL) -> bool:
        z = np.sort_complex(self.eigenvalues)
        w = np.sort_complex(np.conj(self.eigenvalues))
        return bool(np.all(np.abs(z - w) <= tol))


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    std_error: float
    n_samples: int
    statistic_id: str
    imag_mean: float = 0.0
    imag_std_error: float = 0.0
    rejected: int = 0

    def z_score(self, target: float) -> float:
        diff = self.mean - target
        if self.std_error == 0:
            return 0.0 if diff == 0 else math.copysign(math.inf, diff)
        return diff / self.std_error


def sample_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """One N x N matrix of i.i.d. standard normal entries."""
    if n < 1:
        raise ValueError("N must be >= 1")
    return rng.standard_normal((n, n))


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng([seed, block])


def sample_block(n: int, seed: int, block: int, count: int = BLOCK_SIZE) -> np.ndarray:
    """Matrices ``block*BLOCK_SIZE .. + count`` of the stream, shape (count, N, N)."""
    return block_rng(seed, block).standard_normal((BLOCK_SIZE, n, n))[:count]


def eigenvalues(h: np.ndarray) -> SpectrumSample:
    """Eigenvalues of one real square matrix, symmetrised under conjugation."""
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("need a square matrix")
    z, ok = eigenvalues_batch(h[None])
    if not ok[0]:
        raise ConvergenceFailure("eigenvalues are not closed under conjugation")
    return SpectrumSample(z[0])


def eigenvalues_batch(hs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues for a stack (B, N, N); returns (values (B, N), accepted mask).

    Each spectrum is sorted and replaced by the average of itself and its
    conjugate partner, which enforces exact conjugate closure. Spectra whose
    partner mismatch exceeds :data:`CONJUGATE_TOL`, or whose eigensolver
    failed, are flagged as rejected.
    """
    try:
        z = np.linalg.eigvals(hs)
        ok = np.ones(len(hs), dtype=bool)
    except np.linalg.LinAlgError:
        z = np.zeros(hs.shape[:2], dtype=complex)
        ok = np.zeros(len(hs), dtype=bool)
        for i, h in enumerate(hs):
            try:
                z[i] = np.linalg.eigvals(h)
                ok[i] = True
            except np.linalg.LinAlgError:
                pass
    z = np.sort_complex(z)
    partner = np.sort_complex(np.conj(z))
    mismatch = np.max(np.abs(z - partner), axis=1) if z.shape[1] else np.zeros(len(z))
    ok &= mismatch <= CONJUGATE_TOL
    return (z + partner) / 2, ok


@dataclass
class _Accumulator:
    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, values: np.ndarray) -> "_Accumulator":
        if len(values) == 0:
            return cls()
        mean = float(np.mean(values))
        return cls(len(values), mean, float(np.sum((values - mean) ** 2)))

    def merge(self, other: "_Accumulator") -> "_Accumulator":
        if other.n == 0:
            return self
        if self.n == 0:
            return other
        n = self.n + other.n
        delta = other.mean - self.mean
        return _Accumulator(
            n,
            self.mean + delta * other.n / n,
            self.m2 + other.m2 + delta * delta * self.n * other.n / n,
        )

    def std_error(self) -> float:
        if self.n < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.n - 1) / self.n)


# A statistic maps (matrices (B, N, N), spectra (B, N)) to values (B,).
Statistic = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass
class _BlockResult:
    real: dict = field(default_factory=dict)
    imag: dict = field(default_factory=dict)
    rejected: int = 0


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            log.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
    return 1


def run_statistics(
    n: int,
    n_samples: int,
    seed: int,
    statistics: Mapping[str, Statistic],
    need_spectra: bool = True,
    workers: int | None = None,
) -> dict[str, MomentEstimate]:
    """Evaluate several statistics on one shared stream of sampled matrices."""
    if n < 1:
        raise ValueError("N must be >= 1")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    n_blocks = -(-n_samples // BLOCK_SIZE)

    def do_block(b: int) -> _BlockResult:
        count = min(BLOCK_SIZE, n_samples - b * BLOCK_SIZE)
        hs = sample_block(n, seed, b, count)
        res = _BlockResult()
        if need_spectra:
            z, ok = eigenvalues_batch(hs)
            res.rejected = int(np.count_nonzero(~ok))
            hs, z = hs[ok], z[ok]
        else:
            z = None
        for name, fn in statistics.items():
            vals = np.asarray(fn(hs, z))
            res.real[name] = _Accumulator.of(np.real(vals).astype(float))
            res.imag[name] = _Accumulator.of(np.imag(vals).astype(float))
        return res

    workers = worker_count() if workers is None else workers
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(do_block, range(n_blocks)))
    else:
        blocks = [do_block(b) for b in range(n_blocks)]

    rejected = sum(b.rejected for b in blocks)
    if rejected:
        log.warning("rejected %d of %d spectra (conjugate closure or convergence)", rejected, n_samples)
    out = {}
    for name in statistics:
        re, im = _Accumulator(), _Accumulator()
        for b in blocks:
            re = re.merge(b.real[name])
            im = im.merge(b.imag[name])
        out[name] = MomentEstimate(
            mean=re.mean,
            std_error=re.std_error(),
            n_samples=re.n,
            statistic_id=name,
            imag_mean=im.mean,
            imag_std_error=im.std_error(),
            rejected=rejected,
        )
    return out


def _check_samples(n_samples: int) -> None:
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n_samples}")


def schur_statistic(lam: Partition) -> Statistic:
    return lambda hs, z: schur_batch(lam, z)


def trace_statistic(power: int) -> Statistic:
    if power < 1:
        raise ValueError("power must be >= 1")
    return lambda hs, z: np.trace(np.linalg.matrix_power(hs, power), axis1=1, axis2=2)


def charpoly_pair_statistic(x1: float, x2: float) -> Statistic:
    def stat(hs, z):
        eye = np.eye(hs.shape[1])
        return np.linalg.det(eye + x1 * hs) * np.linalg.det(eye + x2 * hs)

    return stat


def schur_id(lam: Partition, n: int) -> str:
    return f"schur[{lam}]@N={n}"


def trace_id(power: int, n: int) -> str:
    return f"trace[{power}]@N={n}"


def charpoly_id(x1: float, x2: float, n: int) -> str:
    return f"charpoly[{x1},{x2}]@N={n}"


def estimate_schur_average(lam: Partition, n: int, n_samples: int, seed: int) -> MomentEstimate:
    """Mean of Re s_lam over sampled spectra; Im is tracked in ``imag_mean``."""
    if len(lam) > n:
        raise ValueError(f"{lam} has more than N = {n} parts")
    _check_samples(n_samples)
    sid = schur_id(lam, n)
    est = run_statistics(n, n_samples, seed, {sid: schur_statistic(lam)})[sid]
    # spectra are conjugate-closed, so Im s_lam is rounding noise
    if abs(est.imag_mean) > 5 * est.imag_std_error + 1e-9 * (1 + abs(est.mean)):
        raise RuntimeError(f"{sid}: imaginary part {est.imag_mean} is not negligible")
    return est


def estimate_trace_moment(power: int, n: int, n_samples: int, seed: int) -> MomentEstimate:
    """Mean of Tr(H^power), computed from matrix powers (no eigenvalues)."""
    _check_samples(n_samples)
    sid = trace_id(power, n)
    return run_statistics(n, n_samples, seed, {sid: trace_statistic(power)}, need_spectra=False)[sid]


def estimate_charpoly_pair(x1: float, x2: float, n: int, n_samples: int, seed: int) -> MomentEstimate:
    _check_samples(n_samples)
    sid = charpoly_id(x1, x2, n)
    return run_statistics(n, n_samples, seed, {sid: charpoly_pair_statistic(x1, x2)}, need_spectra=False)[sid]


# --- complex eigenvalue density ---------------------------------------------

def density_r1(z, n: int):
    """Density of complex eigenvalues at Im z > 0 (0 on the real axis).

    R1 = 2y exp(y^2 - x^2) erfc(sqrt(2) y) / sqrt(2 pi) * sum_{k<=N-2} |z|^{2k}/k!,
    written with erfcx to avoid overflow for large y.
    """
    z = np.asarray(z, dtype=complex)
    x, y = z.real, np.abs(z.imag)
    r2 = x * x + y * y
    series = np.zeros_like(r2)
    term = np.ones_like(r2)
    for k in range(n - 1):
        series += term
        term = term * r2 / (k + 1)
    weight = np.exp(-x * x - y * y) * special.erfcx(math.sqrt(2) * y)
    return 2 * y * weight * series / math.sqrt(2 * math.pi)


_GL_NODES = 12


def bin_integrals(n: int, x_edges: np.ndarray, y_edges: np.ndarray) -> np.ndarray:
    """Integral of R1 over each rectangle, tensor Gauss-Legendre per bin; shape (nx, ny)."""
    t, w = np.polynomial.legendre.leggauss(_GL_NODES)
    x0, x1 = x_edges[:-1], x_edges[1:]
    y0, y1 = y_edges[:-1], y_edges[1:]
    xs = (x0[:, None] + x1[:, None]) / 2 + (x1 - x0)[:, None] / 2 * t  # (nx, g)
    ys = (y0[:, None] + y1[:, None]) / 2 + (y1 - y0)[:, None] / 2 * t  # (ny, g)
    vals = density_r1(xs[:, None, :, None] + 1j * ys[None, :, None, :], n)  # (nx, ny, g, g)
    integ = np.einsum("abij,i,j->ab", vals, w, w)
    return integ * ((x1 - x0) / 2)[:, None] * ((y1 - y0) / 2)[None, :]


def upper_half_mass(n: int, y_min: float = 0.0) -> float:
    """Expected number of eigenvalues with Im z > y_min, by quadrature of R1."""
    from scipy import integrate

    def f(y, x):
        return float(density_r1(complex(x, y), n))

    # R1 decays like exp(-(|z| - sqrt(N))^2), so a box of radius sqrt(N) + 10 suffices
    r = math.sqrt(n) + 10
    val, _ = integrate.dblquad(f, -r, r, y_min, r, epsabs=1e-11, epsrel=1e-11)
    return val


@dataclass
class DensityReport:
    n: int
    n_samples: int
    seed: int
    x_edges: list
    y_edges: list
    observed: list
    expected: list
    z_scores: list
    max_abs_z: float
    bins_checked: int
    complex_count: int
    complex_expected: float
    complex_z: float
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def density_histogram_check(
    n: int,
    n_samples: int,
    seed: int,
    extent: float | None = None,
    bins: tuple[int, int] = (16, 8),
    band: float = 0.05,
    min_expected: float = 10.0,
    threshold: float = 5.0,
) -> DensityReport:
    """Histogram eigenvalues with Im z > band against bin integrals of R1.

    Bins whose expected count is below ``min_expected`` are pooled with the
    area outside the grid into a single overflow cell. Deviations are in
    Poisson standard errors (sqrt of the expected count).
    """
    if n < 2:
        raise ValueError("N must be >= 2")
    _check_samples(n_samples)
    extent = math.sqrt(n) + 1.5 if extent is None else extent
    x_edges = np.linspace(-extent, extent, bins[0] + 1)
    y_edges = np.linspace(band, extent, bins[1] + 1)

    counts = np.zeros(bins, dtype=np.int64)
    complex_count = 0
    above_band = 0
    n_blocks = -(-n_samples // BLOCK_SIZE)
    accepted = 0
    for b in range(n_blocks):
        count = min(BLOCK_SIZE, n_samples - b * BLOCK_SIZE)
        z, ok = eigenvalues_batch(sample_block(n, seed, b, count))
        z = z[ok]
        accepted += len(z)
        upper = z[z.imag > 1e-6]
        complex_count += len(upper)
        above_band += int(np.count_nonzero(upper.imag >= band))
        h, _, _ = np.histogram2d(upper.real, upper.imag, bins=[x_edges, y_edges])
        counts += h.astype(np.int64)

    mass = upper_half_mass(n)
    mass_above_band = upper_half_mass(n, band)
    expected = accepted * bin_integrals(n, x_edges, y_edges)
    big = expected >= min_expected
    z_scores = np.where(big, (counts - expected) / np.sqrt(np.where(big, expected, 1.0)), 0.0)

    # everything above the band that is outside the grid or in a sparse bin
    overflow_obs = above_band - int(counts[big].sum())
    overflow_exp = accepted * mass_above_band - float(expected[big].sum())
    overflow_z = (overflow_obs - overflow_exp) / math.sqrt(overflow_exp) if overflow_exp > 0 else 0.0

    complex_expected = accepted * mass
    complex_z = (complex_count - complex_expected) / math.sqrt(complex_expected)
    max_abs_z = float(max(np.max(np.abs(z_scores)), abs(overflow_z)))
    return DensityReport(
        n=n,
        n_samples=accepted,
        seed=seed,
        x_edges=x_edges.tolist(),
        y_edges=y_edges.tolist(),
        observed=counts.tolist(),
        expected=expected.tolist(),
        z_scores=z_scores.tolist(),
        max_abs_z=max_abs_z,
        bins_checked=int(big.sum()) + 1,
        complex_count=complex_count,
        complex_expected=complex_expected,
        complex_z=complex_z,
        passed=max_abs_z < threshold and abs(complex_z) < threshold,
    )

