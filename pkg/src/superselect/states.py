"""Complex superpositions over a fixed-register-count basis.

A :class:`StateVector` is a finite sparse map from product basis states to
complex amplitudes. All states in one vector share the register count ``n``;
superpositions across different particle numbers are deliberately not
representable. Amplitudes below the prune tolerance are dropped on
construction, so cancellation produces the genuine zero state (empty map).

Cross-sector vectors can be built and decomposed — the tests need to exhibit
them — but ``validate_superselection`` is the gate every physical-scenario
entry point goes through.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .charges import GAUGED, SpeciesRegistry
from .errors import ConfigurationError, DomainError, ShapeError
from .fock import BasisState, RegisterLabel, SectorIndex, state_sector, validate_label

#: Amplitudes with magnitude below this are dropped from term maps.
PRUNE_TOL = 1e-12
#: A state counts as normalized when | ||psi|| - 1 | is within this.
NORM_TOL = 1e-9


class StateVector:
    """Immutable sparse superposition of :class:`BasisState` terms.

    Parameters
    ----------
    terms:
        Mapping from BasisState to complex amplitude. Entries with magnitude
        below :data:`PRUNE_TOL` are discarded.
    n:
        Register count. Required when ``terms`` is empty (the zero state);
        otherwise inferred and cross-checked against every key.
    """

    __slots__ = ("_terms", "n")

    def __init__(self, terms, n: int | None = None):
        pruned: dict[BasisState, complex] = {}
        for state, amp in terms.items():
            if n is None:
                n = state.n
            elif state.n != n:
                raise ShapeError(f"mixed register counts: {state.n} vs {n}")
            amp = complex(amp)
            if abs(amp) >= PRUNE_TOL:
                pruned[state] = amp
        if n is None:
            raise ShapeError("register count is undefined for an empty term map; pass n")
        self._terms = pruned
        self.n = n

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @classmethod
    def from_basis_state(cls, state: BasisState, amplitude: complex = 1.0) -> "StateVector":
        return cls({state: amplitude})

    def items_sorted(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def amplitude(self, state: BasisState) -> complex:
        return self._terms.get(state, 0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self._terms.values()))

    def is_zero(self) -> bool:
        return not self._terms

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, StateVector)
            and self.n == other.n
            and self._terms == other._terms
        )

    def __repr__(self) -> str:
        inside = " + ".join(f"({a:.4g}){b}" for b, a in self.items_sorted()[:4])
        more = "" if len(self._terms) <= 4 else f" + {len(self._terms) - 4} more"
        return f"StateVector[n={self.n}] {inside or '0'}{more}"


def superpose(pairs) -> StateVector:
    """Linear combination ``sum(coef * state)`` with term merging and pruning."""
    pairs = list(pairs)
    if not pairs:
        raise ShapeError("superpose needs at least one (coefficient, state) pair")
    n = pairs[0][1].n
    acc: dict[BasisState, complex] = {}
    for coef, vec in pairs:
        if vec.n != n:
            raise ShapeError(f"mixed register counts: {vec.n} vs {n}")
        if coef == 0:
            continue
        for state, amp in vec.terms.items():
            acc[state] = acc.get(state, 0j) + complex(coef) * amp
    return StateVector(acc, n=n)


def scale(coef: complex, vec: StateVector) -> StateVector:
    return superpose([(coef, vec)])


def normalize(vec: StateVector) -> StateVector:
    nrm = vec.norm()
    if nrm == 0.0:
        raise DomainError("cannot normalize the zero state")
    return scale(1.0 / nrm, vec)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Hermitian inner product, conjugate-linear in the first argument."""
    if a.n != b.n:
        raise ShapeError(f"mixed register counts: {a.n} vs {b.n}")
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    total = 0j
    for state in small.terms:
        other = large.amplitude(state)
        if other:
            total += a.amplitude(state).conjugate() * b.amplitude(state)
    return total


@dataclass
class SectorDecomposition:
    """Grouping of a state's terms by gauged net charge; weights are squared norms."""

    parts: dict[SectorIndex, tuple[StateVector, float]]

    def sectors(self) -> list[SectorIndex]:
        return sorted(self.parts)

    def weights(self) -> dict[SectorIndex, float]:
        return {q: w for q, (_, w) in sorted(self.parts.items())}

    def total_weight(self) -> float:
        return sum(w for _, w in self.parts.values())


def sector_decompose(registry: SpeciesRegistry, vec: StateVector) -> SectorDecomposition:
    """Split a state into its charge-sector components; reassembly is exact."""
    groups: dict[SectorIndex, dict[BasisState, complex]] = {}
    for state, amp in vec.terms.items():
        groups.setdefault(state_sector(registry, state), {})[state] = amp
    parts = {
        q: (StateVector(terms, n=vec.n), sum(abs(a) ** 2 for a in terms.values()))
        for q, terms in sorted(groups.items())
    }
    return SectorDecomposition(parts)


@dataclass
class SuperselectionReport:
    """Evidence that a state straddles several sectors: every sector and its weight."""

    sector_weights: dict[SectorIndex, float]

    def describe(self) -> str:
        listed = ", ".join(f"{q}: {w:.6g}" for q, w in sorted(self.sector_weights.items()))
        return f"cross-sector superposition over {len(self.sector_weights)} sectors [{listed}]"


def validate_superselection(registry: SpeciesRegistry, vec: StateVector):
    """Return the unique SectorIndex of a one-sector state, else a SuperselectionReport."""
    if vec.is_zero():
        raise DomainError("superselection is undefined for the zero state")
    decomp = sector_decompose(registry, vec)
    if len(decomp.parts) == 1:
        return next(iter(decomp.parts))
    return SuperselectionReport(decomp.weights())


def require_single_sector(registry: SpeciesRegistry, vec: StateVector) -> SectorIndex:
    """validate_superselection, hardened: raises on a cross-sector state."""
    from .errors import SuperselectionError

    verdict = validate_superselection(registry, vec)
    if isinstance(verdict, SuperselectionReport):
        raise SuperselectionError(verdict.describe())
    return verdict


def apply_u1_gauge(
    registry: SpeciesRegistry, vec: StateVector, component: str, theta: float
) -> StateVector:
    """Phase each term by exp(+i * q * theta), q its net charge in ``component``.

    Only gauged components generate a phase action; naming a global component
    is a configuration error.
    """
    idx = registry.component_index(component)
    if registry.charge_specs[idx].kind != GAUGED:
        raise ConfigurationError(
            f"charge component {component!r} is global; only gauged components generate a gauge action"
        )
    new_terms = {}
    for state, amp in vec.terms.items():
        q = sum(registry.get(l.species_id).charges.components[idx] for l in state.labels)
        new_terms[state] = amp * cmath.exp(1j * q * theta)
    return StateVector(new_terms, n=vec.n)


def charge_conjugate(registry: SpeciesRegistry, vec: StateVector) -> StateVector:
    """Replace every label's species by its conjugate partner; spins and amplitudes kept."""
    new_terms = {}
    for state, amp in vec.terms.items():
        labels = tuple(
            RegisterLabel(registry.conjugate(l.species_id).id, l.spin) for l in state.labels
        )
        new_terms[BasisState(labels)] = amp
    return StateVector(new_terms, n=vec.n)


def max_term_deviation(a: StateVector, b: StateVector) -> float:
    """Largest amplitude difference over the union support; 0 means identical vectors."""
    if a.n != b.n:
        raise ShapeError(f"mixed register counts: {a.n} vs {b.n}")
    keys = set(a.terms) | set(b.terms)
    return max((abs(a.amplitude(k) - b.amplitude(k)) for k in keys), default=0.0)


# -- dense coordinate bridge -------------------------------------------------

def coordinates(vec: StateVector, basis: list[BasisState]) -> np.ndarray:
    """Amplitude column of ``vec`` in the given basis order; support must be covered."""
    index = {b: i for i, b in enumerate(basis)}
    out = np.zeros(len(basis), dtype=complex)
    for state, amp in vec.terms.items():
        if state not in index:
            raise DomainError(f"state has support outside the target basis: {state}")
        out[index[state]] = amp
    return out


def from_coordinates(coeffs: np.ndarray, basis: list[BasisState]) -> StateVector:
    if len(coeffs) != len(basis):
        raise ShapeError(f"coordinate length {len(coeffs)} != basis size {len(basis)}")
    n = basis[0].n if basis else None
    return StateVector({b: c for b, c in zip(basis, coeffs)}, n=n)


# -- JSON round trip ----------------------------------------------------------

def state_to_dict(vec: StateVector) -> dict:
    return {
        "n": vec.n,
        "terms": [
            {
                "labels": [{"species": l.species_id, "spin": l.spin} for l in state.labels],
                "re": amp.real,
                "im": amp.imag,
            }
            for state, amp in vec.items_sorted()
        ],
    }


def state_from_dict(data: dict, registry: SpeciesRegistry | None = None) -> StateVector:
    try:
        n = data["n"]
        raw_terms = data["terms"]
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"state document missing field: {exc}") from None
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ConfigurationError(f"state field 'n' must be a positive integer, got {n!r}")
    terms: dict[BasisState, complex] = {}
    for entry in raw_terms:
        labels = []
        for raw in entry["labels"]:
            spin = raw.get("spin", 0)
            if isinstance(spin, bool) or not isinstance(spin, int):
                raise ConfigurationError(f"state field 'spin' must be an integer, got {spin!r}")
            labels.append(RegisterLabel(str(raw["species"]), spin))
        state = BasisState(tuple(labels))
        if state.n != n:
            raise ConfigurationError(
                f"term has {state.n} labels but state declares n={n}"
            )
        if registry is not None:
            for label in labels:
                validate_label(registry, label)
        amp = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
        terms[state] = terms.get(state, 0j) + amp
    return StateVector(terms, n=n)


def save_state(vec: StateVector, path: str) -> None:
    # json emits floats via repr (shortest round-trip form), so save/load is bit-exact.
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(vec), fh, indent=2)
        fh.write("\n")


def load_state(
    path: str, registry: SpeciesRegistry | None = None, renormalize: bool = False
) -> StateVector:
    with open(path, "r", encoding="utf-8") as fh:
        vec = state_from_dict(json.load(fh), registry=registry)
    return normalize(vec) if renormalize else vec
