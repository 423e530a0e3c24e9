"""Product basis states over fixed registers and their charge sectors.

Registers are distinguishable excitation slots (think momentum labels); each
register holds exactly one excitation identified by a (species, spin) label.
No exchange symmetrization is applied: the two orderings of a pair are two
distinct basis states.

Enumeration order is the package-wide canonical order: register-major,
species ids lexicographic, spin indices ascending. The first register is the
most significant position, so the last register varies fastest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .charges import ChargeVector, SpeciesRegistry
from .errors import ConfigurationError, DomainError


@dataclass(frozen=True, order=True)
class RegisterLabel:
    """One register's content: a species id plus a spin index below its multiplicity."""

    species_id: str
    spin: int = 0


@dataclass(frozen=True, order=True)
class BasisState:
    """A multi-particle product state: one RegisterLabel per register, order-identifying."""

    labels: tuple[RegisterLabel, ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def __str__(self) -> str:
        return "|" + ",".join(
            f"{l.species_id}:{l.spin}" if l.spin else l.species_id for l in self.labels
        ) + ">"


@dataclass(frozen=True, order=True)
class SectorIndex:
    """Net charge restricted to the gauged components; labels one superselection sector."""

    gauged_charges: tuple[int, ...]

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.gauged_charges) + ")"


def sector_of(registry: SpeciesRegistry, total: ChargeVector) -> SectorIndex:
    """Project a total charge vector onto the gauged components."""
    return SectorIndex(tuple(total.components[i] for i in registry.gauged_indices()))


def validate_label(registry: SpeciesRegistry, label: RegisterLabel) -> None:
    species = registry.get(label.species_id)
    if not 0 <= label.spin < species.spin_multiplicity:
        raise DomainError(
            f"spin index {label.spin} out of range for species {label.species_id!r} "
            f"(multiplicity {species.spin_multiplicity})"
        )


def register_alphabet(registry: SpeciesRegistry, allowed=None) -> list[RegisterLabel]:
    """The canonical per-register label list: species lexicographic, spins ascending."""
    if allowed is None:
        ids = registry.species_ids
    else:
        ids = sorted(set(allowed))
        if not ids:
            raise ConfigurationError("allowed species set is empty")
        for sid in ids:
            registry.get(sid)  # raises UnknownSpeciesError
    return [
        RegisterLabel(sid, q)
        for sid in ids
        for q in range(registry.get(sid).spin_multiplicity)
    ]


def enumerate_basis(registry: SpeciesRegistry, n: int, allowed=None) -> list[BasisState]:
    """All (species x spin) assignments over ``n`` registers in canonical order."""
    if n < 1:
        raise ConfigurationError(f"register count must be >= 1, got {n}")
    alphabet = register_alphabet(registry, allowed)
    return [BasisState(labels) for labels in itertools.product(alphabet, repeat=n)]


def total_charge(registry: SpeciesRegistry, state: BasisState) -> ChargeVector:
    """Componentwise sum of the species charges over all registers."""
    total = registry.zero_charge()
    for label in state.labels:
        validate_label(registry, label)
        total = total + registry.get(label.species_id).charges
    return total


def state_sector(registry: SpeciesRegistry, state: BasisState) -> SectorIndex:
    return sector_of(registry, total_charge(registry, state))


def _coerce_sector(registry: SpeciesRegistry, sector) -> SectorIndex:
    if not isinstance(sector, SectorIndex):
        sector = SectorIndex(tuple(sector))
    expected = len(registry.gauged_indices())
    if len(sector.gauged_charges) != expected:
        raise ConfigurationError(
            f"sector arity {len(sector.gauged_charges)} != gauged component count {expected}"
        )
    return sector


def sector_basis(registry: SpeciesRegistry, n: int, sector, allowed=None) -> list[BasisState]:
    """The sublist of ``enumerate_basis`` with gauged net charge equal to ``sector``."""
    sector = _coerce_sector(registry, sector)
    return [b for b in enumerate_basis(registry, n, allowed) if state_sector(registry, b) == sector]


def attained_sectors(registry: SpeciesRegistry, n: int, allowed=None) -> list[SectorIndex]:
    """Sorted list of the sectors attained by some basis state."""
    return sorted({state_sector(registry, b) for b in enumerate_basis(registry, n, allowed)})
