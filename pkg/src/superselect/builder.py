"""Constructs complete orthonormal charge-sector bases of packaged entangled states.

Strategy: start from the deterministic product-state sector basis, seed with
paired combinations (b1 +- b2)/sqrt(2), orthonormalize, then walk the vectors
in order and repair any that fail the every-cut entanglement predicate by
plane rotations against partner vectors. Rotations within an orthonormal set
preserve orthonormality and span exactly, so only the predicate needs
rechecking after each repair.

Sectors where no entangled vector can exist (dimension 1, or single-register
states) come back flagged degenerate instead of erroring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .charges import SpeciesRegistry
from .entangle import is_packaged_entangled
from .errors import ConfigurationError, DomainError, SimulatorError
from .fock import SectorIndex, sector_basis
from .states import StateVector, coordinates, from_coordinates

SPAN_TOL = 1e-8


@dataclass
class BuilderConfig:
    ortho_tolerance: float = 1e-9
    max_repair_attempts: int = 64
    rng_seed: int = 0

    def __post_init__(self):
        if self.ortho_tolerance <= 0:
            raise ConfigurationError("ortho_tolerance must be positive")
        if self.max_repair_attempts < 1:
            raise ConfigurationError("max_repair_attempts must be >= 1")


@dataclass
class EntangledBasis:
    """Output of the builder: sector-spanning orthonormal vectors plus diagnostics."""

    vectors: list[StateVector]
    sector: SectorIndex
    n: int
    diagnostics: list[dict] = field(default_factory=list)
    degenerate: bool = False
    separable_indices: list[int] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.vectors)


def _orthonormalize(columns: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt with one reorthogonalization pass, column by column."""
    out = columns.astype(complex).copy()
    d = out.shape[1]
    for k in range(d):
        for _ in range(2):
            for j in range(k):
                out[:, k] -= (out[:, j].conj() @ out[:, k]) * out[:, j]
        nrm = np.linalg.norm(out[:, k])
        if nrm < 1e-14:
            raise DomainError(f"orthonormalization hit a linearly dependent column at index {k}")
        out[:, k] /= nrm
    return out


def _rotate(columns: np.ndarray, i: int, k: int, theta: float) -> None:
    """In-place plane rotation of columns i and k; exactly orthonormality-preserving."""
    ci, ck = columns[:, i].copy(), columns[:, k].copy()
    columns[:, i] = math.cos(theta) * ci - math.sin(theta) * ck
    columns[:, k] = math.sin(theta) * ci + math.cos(theta) * ck


# random repair angles stay away from 0 and pi/2, where a rotation degenerates
# into identity or a column swap
_ANGLE_LO, _ANGLE_HI = 0.1, math.pi / 2 - 0.1
_SINGLE_ROUNDS = 8


def _repair(cols, k, status, entangled, cfg, rng, log) -> bool:
    """Make column k pass the predicate via orthonormality-preserving rotations.

    Three escalating phases, all of which leave the set's span and pairwise
    orthonormality intact:
      A. pi/4 single rotations against each partner in order;
      B. seeded random-angle single rotations;
      C. seeded random-angle rotation chains across all partners, which merge
         the supports of every column into column k. Single rotations cannot
         fix vectors whose combined two-column support misses a register
         label entirely (every such vector factorizes at that register), so
         the chain phase is what guarantees full-support candidates.
    A repair is committed only if column k passes the predicate and every
    modified previously-accepted column still passes.
    """
    d = cols.shape[1]
    # entangled predecessors first, then not-yet-processed columns
    partners = [i for i in range(k) if status[i]] + list(range(k + 1, d))
    if not partners:
        return False

    def try_single(p: int, theta: float) -> bool:
        saved = cols[:, (p, k)].copy()
        _rotate(cols, p, k, theta)
        accept = entangled(cols[:, k]) and (p > k or entangled(cols[:, p]))
        log.append({"phase": "single", "partner": p, "angle": theta, "accepted": accept})
        if not accept:
            cols[:, (p, k)] = saved  # exact restore, no rotation round-off
        return accept

    for p in partners:
        if try_single(p, math.pi / 4.0):
            return True
    for _ in range(min(_SINGLE_ROUNDS, cfg.max_repair_attempts)):
        theta = float(rng.uniform(_ANGLE_LO, _ANGLE_HI))
        for p in partners:
            if try_single(p, theta):
                return True

    for _ in range(cfg.max_repair_attempts):
        saved = cols.copy()
        angles = [float(rng.uniform(_ANGLE_LO, _ANGLE_HI)) for _ in partners]
        for p, theta in zip(partners, angles):
            _rotate(cols, p, k, theta)
        accept = entangled(cols[:, k]) and all(
            entangled(cols[:, p]) for p in partners if p < k
        )
        log.append({"phase": "chain", "partners": partners, "angles": angles, "accepted": accept})
        if accept:
            return True
        cols[:] = saved
    return False


def build_packaged_entangled_basis(
    registry: SpeciesRegistry,
    n: int,
    sector,
    cfg: BuilderConfig | None = None,
    allowed=None,
) -> EntangledBasis:
    """Build an orthonormal basis of the (n, sector) subspace, every vector entangled.

    Raises DomainError on an empty sector. Returns a degenerate-flagged basis
    (with the separable vectors identified) when the sector admits no
    entangled vector or repair runs out of attempts.
    """
    cfg = cfg or BuilderConfig()
    product_basis = sector_basis(registry, n, sector, allowed=allowed)
    if not product_basis:
        raise DomainError(f"sector {sector} is empty for n={n}")
    if not isinstance(sector, SectorIndex):
        sector = SectorIndex(tuple(sector))
    d = len(product_basis)

    # seed columns: (b_{2k} +- b_{2k+1})/sqrt(2) pairs, odd leftover kept as-is
    cols = np.zeros((d, d), dtype=complex)
    seed_kind = []
    root_half = 1.0 / math.sqrt(2.0)
    for k in range(d // 2):
        cols[2 * k, 2 * k] = root_half
        cols[2 * k + 1, 2 * k] = root_half
        cols[2 * k, 2 * k + 1] = root_half
        cols[2 * k + 1, 2 * k + 1] = -root_half
        seed_kind += ["pair_plus", "pair_minus"]
    if d % 2:
        cols[d - 1, d - 1] = 1.0
        seed_kind.append("leftover")
    cols = _orthonormalize(cols)

    def entangled(col: np.ndarray) -> bool:
        return bool(is_packaged_entangled(registry, from_coordinates(col, product_basis)))

    diagnostics: list[dict] = []
    if d == 1 or n == 1:
        vectors = [from_coordinates(cols[:, k], product_basis) for k in range(d)]
        separable = list(range(d))
        for k in range(d):
            diagnostics.append(
                {"index": k, "seed": seed_kind[k], "entangled": False, "repairs": []}
            )
        return EntangledBasis(
            vectors=vectors,
            sector=sector,
            n=n,
            diagnostics=diagnostics,
            degenerate=True,
            separable_indices=separable,
        )

    rng = np.random.default_rng(cfg.rng_seed)
    status: list[bool] = [False] * d
    for k in range(d):
        log: list[dict] = []
        ok = entangled(cols[:, k])
        if not ok:
            ok = _repair(cols, k, status, entangled, cfg, rng, log)
        status[k] = ok
        diagnostics.append(
            {"index": k, "seed": seed_kind[k], "entangled": ok, "repairs": log}
        )

    separable = [k for k in range(d) if not status[k]]
    vectors = [from_coordinates(cols[:, k], product_basis) for k in range(d)]
    return EntangledBasis(
        vectors=vectors,
        sector=sector,
        n=n,
        diagnostics=diagnostics,
        degenerate=bool(separable),
        separable_indices=separable,
    )


def verify_basis(basis: EntangledBasis, registry: SpeciesRegistry, allowed=None) -> list[str]:
    """Independent recheck of every EntangledBasis invariant; empty list iff all hold."""
    findings: list[str] = []
    product_basis = sector_basis(registry, basis.n, basis.sector, allowed=allowed)
    d = len(product_basis)
    if basis.dimension != d:
        findings.append(f"vector count {basis.dimension} != sector dimension {d}")
    tol = BuilderConfig().ortho_tolerance

    try:
        mat = np.column_stack([coordinates(v, product_basis) for v in basis.vectors])
    except DomainError as exc:  # support outside the sector
        findings.append(f"vectors are not expressible in the sector basis: {exc}")
        return findings

    gram = mat.conj().T @ mat
    off = gram - np.eye(basis.dimension)
    norm_dev = float(np.max(np.abs(np.diag(off)))) if basis.dimension else 0.0
    cross = off - np.diag(np.diag(off))
    cross_dev = float(np.max(np.abs(cross))) if basis.dimension else 0.0
    if norm_dev > tol:
        findings.append(f"norm deviation {norm_dev:.3e} exceeds {tol}")
    if cross_dev > tol:
        findings.append(f"orthogonality deviation {cross_dev:.3e} exceeds {tol}")

    # VV^dagger is d x d whatever the vector count, so span deficiency is
    # visible even when vectors are missing (projector rank < d)
    span_dev = float(np.linalg.norm(mat @ mat.conj().T - np.eye(d)))
    if span_dev > SPAN_TOL:
        findings.append(
            f"span projector deviates from sector projector by {span_dev:.3e} (Frobenius)"
        )

    for k, vec in enumerate(basis.vectors):
        try:
            report = is_packaged_entangled(registry, vec)
        except SimulatorError as exc:
            findings.append(f"vector {k}: entanglement predicate not evaluable ({exc})")
            continue
        if not report.entangled and k not in basis.separable_indices:
            findings.append(f"vector {k} fails the entanglement predicate but is not flagged")
    if basis.separable_indices and not basis.degenerate:
        findings.append("separable vectors present but degenerate flag not set")
    return findings


def basis_metrics(basis: EntangledBasis, registry: SpeciesRegistry, allowed=None) -> dict:
    """Numeric summary used by reports: Gram and span deviations, entangled count."""
    product_basis = sector_basis(registry, basis.n, basis.sector, allowed=allowed)
    mat = np.column_stack([coordinates(v, product_basis) for v in basis.vectors])
    gram = mat.conj().T @ mat
    d = len(product_basis)
    return {
        "dimension": d,
        "max_gram_deviation": float(np.max(np.abs(gram - np.eye(basis.dimension)))),
        "span_frobenius_deviation": float(np.linalg.norm(mat @ mat.conj().T - np.eye(d)))
        if basis.dimension == d
        else None,
        "entangled_count": sum(
            1 for k in range(basis.dimension) if k not in basis.separable_indices
        ),
        "degenerate": basis.degenerate,
        "separable_indices": list(basis.separable_indices),
    }
