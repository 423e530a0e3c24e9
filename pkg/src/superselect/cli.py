"""Command-line front end: scenario demos, validation, basis building, analysis."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .builder import BuilderConfig, basis_metrics, build_packaged_entangled_basis, verify_basis
from .charges import load_registry
from .entangle import (
    Bipartition,
    all_bipartitions,
    entanglement_entropy,
    internal_charge_marginal,
    is_entangled_somewhere,
    is_packaged_entangled,
    ppt_check,
    schmidt,
)
from .errors import SimulatorError, SuperselectionError
from .fock import SectorIndex
from .measure import measure_spin, sample_measurement, spin_z_observable
from .scenarios import SCENARIO_NAMES, build_scenario
from .states import (
    apply_u1_gauge,
    charge_conjugate,
    inner_product,
    load_state,
    max_term_deviation,
    save_state,
    state_to_dict,
    superpose,
    validate_superselection,
    SuperselectionReport,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _color_enabled() -> bool:
    return "SUPERSELECT_NO_COLOR" not in os.environ


def _mark(ok: bool) -> str:
    text = "ok" if ok else "MISMATCH"
    if not _color_enabled():
        return text
    return f"\x1b[32m{text}\x1b[0m" if ok else f"\x1b[31m{text}\x1b[0m"


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _parse_charge(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise SimulatorError(f"--charge expects comma-separated integers, got {text!r}") from None


def _parse_cut(text: str, n: int) -> Bipartition:
    try:
        left = {int(part) for part in text.split(",")}
    except ValueError:
        raise SimulatorError(f"--cut expects comma-separated register indices, got {text!r}") from None
    return Bipartition.from_left(left, n)


def _close(a, b, tol=1e-9) -> bool:
    if a is None or b is None:
        return a is b
    return abs(a - b) <= tol


# -- subcommand handlers -------------------------------------------------------

def _run_demo(args) -> tuple[int, dict]:
    registry, state, expect = build_scenario(args.scenario, args.alpha, args.beta)
    rows = []

    verdict = validate_superselection(registry, state)
    if expect.superselection_violation:
        ok = isinstance(verdict, SuperselectionReport)
        computed = {str(q): w for q, w in verdict.sector_weights.items()} if ok else str(verdict)
        rows.append({"property": "superselection_violation", "expected": True, "computed": ok, "ok": ok})
        if ok:
            sectors_ok = sorted(computed) == sorted(str(q) for q in expect.violation_sectors)
            weights_ok = all(
                _close(computed.get(str(q)), w)
                for q, w in zip(expect.violation_sectors, expect.violation_weights)
            )
            rows.append({
                "property": "violation_sectors",
                "expected": {str(q): w for q, w in zip(expect.violation_sectors, expect.violation_weights)},
                "computed": computed,
                "ok": sectors_ok and weights_ok,
            })
    else:
        ok = isinstance(verdict, SectorIndex) and verdict == expect.sector
        rows.append({
            "property": "sector",
            "expected": str(expect.sector),
            "computed": str(verdict) if isinstance(verdict, SectorIndex) else verdict.describe(),
            "ok": ok,
        })

    if expect.entangled is not None:
        report = is_packaged_entangled(registry, state)
        rows.append({
            "property": "packaged_entangled",
            "expected": expect.entangled,
            "computed": report.entangled,
            "ok": report.entangled == expect.entangled,
        })

    if expect.entropy_first_cut is not None and state.n > 1:
        cut = Bipartition.from_left({0}, state.n)
        ent = entanglement_entropy(state, cut)
        rows.append({
            "property": "entropy_first_cut",
            "expected": expect.entropy_first_cut,
            "computed": ent,
            "ok": _close(ent, expect.entropy_first_cut),
        })

    if expect.conjugation_parity is not None:
        conj = charge_conjugate(registry, state)
        dev = max_term_deviation(conj, superpose([(expect.conjugation_parity, state)]))
        rows.append({
            "property": "conjugation_parity",
            "expected": expect.conjugation_parity,
            "computed": complex(inner_product(state, conj)).real,
            "ok": dev <= 1e-12,
        })

    if expect.internal_marginal_entangled is not None:
        cut = Bipartition.from_left({0}, state.n)
        verdict_ppt = ppt_check(internal_charge_marginal(registry, state, cut))
        rows.append({
            "property": "internal_marginal_entangled",
            "expected": expect.internal_marginal_entangled,
            "computed": verdict_ppt.entangled,
            "ok": verdict_ppt.entangled == expect.internal_marginal_entangled,
        })

    if expect.spin_outcome_probabilities is not None:
        records = measure_spin(registry, state, spin_z_observable(registry, 0))
        probs = [r.probability for r in records]
        ok = len(probs) == len(expect.spin_outcome_probabilities) and all(
            _close(p, e) for p, e in zip(probs, expect.spin_outcome_probabilities)
        )
        rows.append({
            "property": "spin_outcome_probabilities",
            "expected": list(expect.spin_outcome_probabilities),
            "computed": probs,
            "ok": ok,
        })

    all_ok = all(r["ok"] for r in rows)
    results = {
        "scenario": args.scenario,
        "expectation": expect.to_dict(),
        "verification": rows,
        "verified": all_ok,
    }
    return (EXIT_OK if all_ok else EXIT_USAGE), results


def _run_validate(args) -> tuple[int, dict]:
    registry = load_registry(args.registry)
    state = load_state(args.state, registry=registry, renormalize=args.normalize)
    verdict = validate_superselection(registry, state)
    if isinstance(verdict, SectorIndex):
        return EXIT_OK, {"status": "single-sector", "sector": str(verdict)}
    return EXIT_VIOLATION, {
        "status": "violation",
        "sectors": {str(q): w for q, w in sorted(verdict.sector_weights.items())},
    }


def _run_basis(args) -> tuple[int, dict]:
    registry = load_registry(args.registry)
    sector = SectorIndex(_parse_charge(args.charge))
    cfg = BuilderConfig(rng_seed=args.seed)
    basis = build_packaged_entangled_basis(registry, args.registers, sector, cfg)
    os.makedirs(args.out, exist_ok=True)
    files = []
    for k, vec in enumerate(basis.vectors):
        path = os.path.join(args.out, f"basis_{k:03d}.json")
        save_state(vec, path)
        files.append(path)
    diag_path = os.path.join(args.out, "diagnostics.json")
    with open(diag_path, "w", encoding="utf-8") as fh:
        json.dump(basis.diagnostics, fh, indent=2)
        fh.write("\n")
    findings = verify_basis(basis, registry)
    results = {
        "sector": str(basis.sector),
        "registers": args.registers,
        "metrics": basis_metrics(basis, registry),
        "verify_findings": findings,
        "vector_files": files,
        "diagnostics_file": diag_path,
    }
    return (EXIT_OK if not findings or basis.degenerate else EXIT_USAGE), results


def _run_entangle(args) -> tuple[int, dict]:
    registry = load_registry(args.registry)
    state = load_state(args.state, registry=registry, renormalize=args.normalize)
    if args.cut:
        cuts = [_parse_cut(c, state.n) for c in args.cut]
    else:
        cuts = all_bipartitions(state.n)
    per_cut = []
    for cut in cuts:
        result = schmidt(state, cut)
        per_cut.append({
            "cut": str(cut),
            "singular_values": [float(v) for v in result.singular_values],
            "rank": result.rank,
            "entropy_nats": entanglement_entropy(state, cut),
        })
    strong = is_packaged_entangled(registry, state)
    weak = is_entangled_somewhere(registry, state)
    results = {
        "cuts": per_cut,
        "packaged_entangled": strong.to_dict(),
        "entangled_somewhere": weak.to_dict(),
    }
    return EXIT_OK, results


def _run_measure(args) -> tuple[int, dict]:
    registry = load_registry(args.registry)
    state = load_state(args.state, registry=registry, renormalize=args.normalize)
    if args.observable != "spin-z":
        raise SimulatorError(f"unsupported observable {args.observable!r}; only spin-z is available")
    obs = spin_z_observable(registry, args.register)
    if args.sample:
        record = sample_measurement(registry, state, obs, args.seed)
        results = {
            "mode": "sample",
            "seed": args.seed,
            "record": {
                "outcome": record.outcome,
                "probability": record.probability,
                "post_state": state_to_dict(record.post_state),
            },
        }
    else:
        records = measure_spin(registry, state, obs)
        results = {
            "mode": "distribution",
            "records": [
                {
                    "outcome": r.outcome,
                    "probability": r.probability,
                    "post_state": state_to_dict(r.post_state),
                }
                for r in records
            ],
        }
    return EXIT_OK, results


def _run_conjugate(args) -> tuple[int, dict]:
    registry = load_registry(args.registry)
    state = load_state(args.state, registry=registry, renormalize=args.normalize)
    out = charge_conjugate(registry, state)
    results = {"state": state_to_dict(out)}
    if args.out:
        save_state(out, args.out)
        results["written"] = args.out
    return EXIT_OK, results


def _run_gauge(args) -> tuple[int, dict]:
    registry = load_registry(args.registry)
    state = load_state(args.state, registry=registry, renormalize=args.normalize)
    out = apply_u1_gauge(registry, state, args.component, args.theta)
    results = {
        "component": args.component,
        "theta": args.theta,
        "state": state_to_dict(out),
    }
    if args.out:
        save_state(out, args.out)
        results["written"] = args.out
    return EXIT_OK, results


# -- wiring --------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="superselect", description=__doc__)
    parser.add_argument("--json", action="store_true", help="emit the full machine report as JSON")
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness (default 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demo", help="build a canned scenario and verify its expectation block")
    p.add_argument("scenario", choices=SCENARIO_NAMES)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.set_defaults(handler=_run_demo)

    p = sub.add_parser("validate", help="check a state file against superselection")
    p.add_argument("--registry", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--normalize", action="store_true", help="renormalize the state on load")
    p.set_defaults(handler=_run_validate)

    p = sub.add_parser("basis", help="build a packaged entangled basis for one charge sector")
    p.add_argument("--registry", required=True)
    p.add_argument("--registers", type=int, required=True)
    p.add_argument("--charge", required=True, help="gauged charge vector, e.g. '0' or '0,-1'")
    p.add_argument("--out", default="basis_out", help="output directory (default: basis_out)")
    # SUPPRESS keeps the global --seed when the subcommand flag is absent
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.set_defaults(handler=_run_basis)

    p = sub.add_parser("entangle", help="Schmidt spectrum, entropy, and entanglement predicates")
    p.add_argument("--registry", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--cut", action="append", help="left-side register indices, e.g. '0,2'; repeatable")
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(handler=_run_entangle)

    p = sub.add_parser("measure", help="projective spin measurement on one register")
    p.add_argument("--registry", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--register", type=int, required=True)
    p.add_argument("--observable", default="spin-z")
    p.add_argument("--sample", action="store_true", help="draw one outcome instead of the distribution")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(handler=_run_measure)

    p = sub.add_parser("conjugate", help="apply charge conjugation to a state file")
    p.add_argument("--registry", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--out", default=None, help="write the conjugated state here")
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(handler=_run_conjugate)

    p = sub.add_parser("gauge", help="apply a U(1) gauge phase to a state file")
    p.add_argument("--registry", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--component", required=True, help="gauged charge component name")
    p.add_argument("--theta", type=float, required=True, help="angle in radians")
    p.add_argument("--out", default=None)
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(handler=_run_gauge)

    return parser


def _input_digests(args) -> dict:
    digests = {}
    for attr in ("registry", "state"):
        path = getattr(args, attr, None)
        if path:
            digests[path] = _digest(path)
    return digests


def _render_text(report: dict, code: int) -> str:
    lines = [f"superselect {report['version']} :: {' '.join(report['command'])}"]
    for path, digest in sorted(report["inputs"].items()):
        lines.append(f"input {path} sha256={digest}")
    lines.append(f"seed: {report['seed']}")
    lines.extend(_render_value("result", report["results"], indent=0))
    status = "OK" if code == EXIT_OK else ("VIOLATION" if code == EXIT_VIOLATION else "ERROR")
    lines.append(f"status: {status} (exit {code})")
    lines.append(f"timestamp: {report['timestamp']}")
    return "\n".join(lines) + "\n"


def _render_value(key, value, indent) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = [f"{pad}{key}:"]
        for k, v in value.items():
            lines.extend(_render_value(k, v, indent + 1))
        return lines
    if isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            return [f"{pad}{key}: [{', '.join(str(v) for v in value)}]"]
        lines = [f"{pad}{key}:"]
        for i, v in enumerate(value):
            lines.extend(_render_value(f"[{i}]", v, indent + 1))
        return lines
    if key == "ok" and isinstance(value, bool):
        return [f"{pad}{key}: {_mark(value)}"]
    return [f"{pad}{key}: {value}"]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        inputs = _input_digests(args)
        code, results = args.handler(args)
    except SuperselectionError as exc:
        print(f"superselect: superselection violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (SimulatorError, OSError, json.JSONDecodeError) as exc:
        print(f"superselect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {
        "command": ["superselect"] + argv,
        "inputs": inputs,
        "seed": args.seed,
        "version": __version__,
        "results": results,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        sys.stdout.write(_render_text(report, code))
    return code


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
