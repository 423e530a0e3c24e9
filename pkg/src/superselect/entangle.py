"""Entanglement analysis across register bipartitions.

Pure-state factorizability is decided by the Schmidt spectrum of the
amplitude matrix reshaped along a cut; the packaged-entanglement predicate
demands Schmidt rank above one on *every* bipartition (genuine multipartite
non-factorizability). For hybrid spin/charge states the internal side is a
generally mixed marginal, so it is probed by partial trace over the spin
indices followed by a positive-partial-transpose test.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .charges import SpeciesRegistry
from .errors import DomainError
from .states import NORM_TOL, StateVector, require_single_sector

#: Singular values at or below this fraction of the largest count as zero.
RANK_REL_TOL = 1e-9
#: Partial-transpose eigenvalues below -PPT_TOL certify entanglement.
PPT_TOL = 1e-10
#: Density-matrix admission tolerances.
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9


@dataclass(frozen=True)
class Bipartition:
    """A cut of the registers into two nonempty complementary groups."""

    left: frozenset[int]
    right: frozenset[int]

    @classmethod
    def from_left(cls, left, n: int) -> "Bipartition":
        left = frozenset(left)
        full = frozenset(range(n))
        if not left or left == full:
            raise DomainError("trivial cut: both sides of a bipartition must be nonempty")
        if not left <= full:
            raise DomainError(f"cut indices {sorted(left - full)} out of range for n={n}")
        return cls(left, full - left)

    @property
    def n(self) -> int:
        return len(self.left) + len(self.right)

    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.left))

    def __str__(self) -> str:
        fmt = lambda side: "{" + ",".join(str(i) for i in sorted(side)) + "}"
        return f"{fmt(self.left)}|{fmt(self.right)}"


def all_bipartitions(n: int) -> list[Bipartition]:
    """Every cut up to complement symmetry: the side containing register 0."""
    if n < 2:
        return []
    cuts = []
    rest = list(range(1, n))
    for r in range(0, n - 1):
        for extra in itertools.combinations(rest, r):
            cuts.append(Bipartition.from_left({0, *extra}, n))
    return cuts


def _check_normalized(vec: StateVector) -> None:
    if abs(vec.norm() - 1.0) > NORM_TOL:
        raise DomainError(f"state is not normalized (norm {vec.norm():.12g})")


def _check_cut(vec: StateVector, cut: Bipartition) -> None:
    if cut.left | cut.right != set(range(vec.n)):
        raise DomainError(f"cut {cut} does not match register count n={vec.n}")


def amplitude_matrix(vec: StateVector, cut: Bipartition):
    """Reshape the term map into a matrix indexed by (left labels, right labels).

    Rows and columns run over the label tuples actually occurring in the
    state's support, in sorted order; absent combinations are zero. Embedding
    into any larger label space adds only zero rows/columns, so the nonzero
    singular values are unaffected by this choice.
    """
    _check_cut(vec, cut)
    lidx = sorted(cut.left)
    ridx = sorted(cut.right)
    lkeys = sorted({tuple(b.labels[i] for i in lidx) for b in vec.terms})
    rkeys = sorted({tuple(b.labels[i] for i in ridx) for b in vec.terms})
    lmap = {k: i for i, k in enumerate(lkeys)}
    rmap = {k: i for i, k in enumerate(rkeys)}
    mat = np.zeros((len(lkeys), len(rkeys)), dtype=complex)
    for state, amp in vec.terms.items():
        mat[lmap[tuple(state.labels[i] for i in lidx)],
            rmap[tuple(state.labels[i] for i in ridx)]] = amp
    return mat, lkeys, rkeys


@dataclass
class SchmidtResult:
    """Singular values (descending) of the cut-reshaped amplitude matrix."""

    singular_values: np.ndarray
    rank: int

    def squared(self) -> np.ndarray:
        return self.singular_values ** 2


def schmidt(vec: StateVector, cut: Bipartition) -> SchmidtResult:
    """Schmidt spectrum across ``cut``; rank 1 iff the state factorizes there."""
    _check_normalized(vec)
    mat, _, _ = amplitude_matrix(vec, cut)
    values = np.linalg.svd(mat, compute_uv=False)
    rank = int(np.sum(values > RANK_REL_TOL * values[0])) if values.size else 0
    return SchmidtResult(singular_values=values, rank=rank)


def entanglement_entropy(vec: StateVector, cut: Bipartition) -> float:
    """Von Neumann entropy (nats) of either side's marginal; 0 for product states."""
    result = schmidt(vec, cut)
    lam = result.squared()
    lam = lam[lam > (RANK_REL_TOL * result.singular_values[0]) ** 2]
    return float(max(0.0, -np.sum(lam * np.log(lam))))


@dataclass
class EntanglementReport:
    """Per-cut Schmidt ranks plus the verdict of the chosen predicate.

    ``undefined`` marks single-register states, where no cut exists and
    entanglement is not a meaningful notion.
    """

    entangled: bool
    predicate: str
    cut_ranks: dict[tuple[int, ...], int] = field(default_factory=dict)
    undefined: bool = False

    def __bool__(self) -> bool:
        return self.entangled

    def to_dict(self) -> dict:
        return {
            "entangled": self.entangled,
            "predicate": self.predicate,
            "undefined": self.undefined,
            "cut_ranks": {",".join(map(str, k)): v for k, v in sorted(self.cut_ranks.items())},
        }


def _rank_report(registry: SpeciesRegistry, vec: StateVector, predicate: str) -> EntanglementReport:
    _check_normalized(vec)
    require_single_sector(registry, vec)
    if vec.n == 1:
        return EntanglementReport(entangled=False, predicate=predicate, undefined=True)
    ranks = {cut.key(): schmidt(vec, cut).rank for cut in all_bipartitions(vec.n)}
    if predicate == "every-cut":
        verdict = all(r > 1 for r in ranks.values())
    else:
        verdict = any(r > 1 for r in ranks.values())
    return EntanglementReport(entangled=verdict, predicate=predicate, cut_ranks=ranks)


def is_packaged_entangled(registry: SpeciesRegistry, vec: StateVector) -> EntanglementReport:
    """Strong predicate: non-factorizable across every bipartition of the registers.

    Requires a normalized single-sector state; cross-sector input raises
    SuperselectionError. The report carries the Schmidt rank of every cut.
    """
    return _rank_report(registry, vec, "every-cut")


def is_entangled_somewhere(registry: SpeciesRegistry, vec: StateVector) -> EntanglementReport:
    """Weak predicate: Schmidt rank above one on at least one bipartition."""
    return _rank_report(registry, vec, "some-cut")


# -- internal-charge marginals and the PPT witness -----------------------------

class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix over a labeled product basis.

    ``register_alphabets`` give each register's local label list; the row
    order is the cartesian product of these alphabets (register-major), which
    is what makes partial transposition along a register cut well defined.
    """

    def __init__(self, entries: np.ndarray, register_alphabets, cut: Bipartition | None = None):
        entries = np.asarray(entries, dtype=complex)
        self.register_alphabets = tuple(tuple(a) for a in register_alphabets)
        self.basis_labels = list(itertools.product(*self.register_alphabets))
        self.cut = cut
        dim = len(self.basis_labels)
        if entries.shape != (dim, dim):
            raise DomainError(
                f"density matrix shape {entries.shape} does not match product basis size {dim}"
            )
        if np.max(np.abs(entries - entries.conj().T)) > HERMITICITY_TOL:
            raise DomainError("density matrix is not Hermitian")
        eigs = np.linalg.eigvalsh(entries)
        if eigs.min() < -PPT_TOL:
            raise DomainError(f"density matrix has negative eigenvalue {eigs.min():.3e}")
        if abs(np.trace(entries).real - 1.0) > TRACE_TOL:
            raise DomainError(f"density matrix trace {np.trace(entries).real:.12g} != 1")
        self.entries = entries

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def local_dims(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.register_alphabets)


def internal_charge_marginal(
    registry: SpeciesRegistry, vec: StateVector, cut: Bipartition | None = None
) -> DensityMatrix:
    """Density matrix on the species labels of all registers, spins traced out.

    The local internal alphabet of each register is the sorted set of species
    occurring there in the state's support. Coherence between two internal
    configurations survives exactly when they share a spin assignment, so
    anti-correlated spin branches decohere the marginal while equal-spin
    branches keep it pure.
    """
    _check_normalized(vec)
    if cut is not None:
        _check_cut(vec, cut)
    n = vec.n
    alphabets = tuple(
        tuple(sorted({b.labels[r].species_id for b in vec.terms})) for r in range(n)
    )
    configs = list(itertools.product(*alphabets))
    index = {c: i for i, c in enumerate(configs)}
    # amplitude grouped by spin assignment: spin tuple -> coordinate vector over configs
    by_spin: dict[tuple[int, ...], np.ndarray] = {}
    for state, amp in vec.terms.items():
        spins = tuple(l.spin for l in state.labels)
        species = tuple(l.species_id for l in state.labels)
        vecrow = by_spin.setdefault(spins, np.zeros(len(configs), dtype=complex))
        vecrow[index[species]] += amp
    rho = np.zeros((len(configs), len(configs)), dtype=complex)
    for row in by_spin.values():
        rho += np.outer(row, row.conj())
    return DensityMatrix(rho, alphabets, cut=cut)


@dataclass
class PptResult:
    """Outcome of the positive-partial-transpose witness."""

    verdict: str  # "entangled" or "separable-consistent"
    min_eigenvalue: float
    conclusive: bool

    @property
    def entangled(self) -> bool:
        return self.verdict == "entangled"


def ppt_check(rho: DensityMatrix, cut: Bipartition | None = None) -> PptResult:
    """Partial transpose on the right factor of ``cut``; negativity certifies entanglement.

    A negative eigenvalue below -1e-10 is always conclusive. A positive
    partial transpose is conclusive only when the bipartite local dimensions
    are at most 2x3; beyond that the result is a witness flagged
    inconclusive-if-positive.
    """
    if cut is None:
        cut = rho.cut
    if cut is None:
        raise DomainError("ppt_check needs a bipartition (none stored on the density matrix)")
    n = len(rho.register_alphabets)
    if cut.left | cut.right != set(range(n)):
        raise DomainError(f"cut {cut} does not match the marginal's register count {n}")
    dims = rho.local_dims()
    lidx = sorted(cut.left)
    ridx = sorted(cut.right)
    d_left = math.prod(dims[i] for i in lidx)
    d_right = math.prod(dims[i] for i in ridx)
    # reorder row and column axes to (left registers, right registers)
    tensor = rho.entries.reshape(dims + dims)
    perm = lidx + ridx
    tensor = tensor.transpose(perm + [n + i for i in perm])
    block = tensor.reshape(d_left, d_right, d_left, d_right)
    transposed = block.transpose(0, 3, 2, 1).reshape(d_left * d_right, d_left * d_right)
    eigs = np.linalg.eigvalsh(transposed)
    min_eig = float(eigs.min())
    if min_eig < -PPT_TOL:
        return PptResult("entangled", min_eig, conclusive=True)
    small = min(d_left, d_right) <= 2 and max(d_left, d_right) <= 3
    trivial = min(d_left, d_right) == 1
    return PptResult("separable-consistent", min_eig, conclusive=small or trivial)
