"""Command-line front end: ``uvqc {telescope,clock,optimize,arealaw,verify}``."""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .arealaw import sweep
from .circuit import CircuitError, read_circuit
from .clock import (
    ClockSystem,
    ClockWidthError,
    build_objective,
    certify_clock,
    check_gap_bound,
    pad_and_project,
)
from .pauli import DimensionError, PauliSum
from .simulator import EIG_DIM_CAP, CapExceeded, DegenerateGroundState, shots_per_term
from .telescope import (
    DEFAULT_MAX_CARDINALITY,
    CardinalityBudgetExceeded,
    TelescopeObjective,
    budget_check,
    certify,
    extend,
)
from .variational import AnsatzError, AnsatzSpec, minimize, witness_check

log = logging.getLogger("uvqc")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_CERT = 4
EXIT_REJECT = 5

OVERLAP_TOL = 1e-9


class CertificationFailure(RuntimeError):
    pass


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _envelope(args, inputs: dict, result: dict, started: float) -> dict:
    return {
        "tool": "uvqc",
        "version": __version__,
        "command": args.argv,
        "seed": args.seed,
        "inputs": {str(k): _digest(v) for k, v in inputs.items()},
        "result": result,
        "wall_time_s": round(time.perf_counter() - started, 6),
    }


def _write_json(path, payload) -> None:
    if path is None:
        return
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _read_pauli(path) -> PauliSum:
    return PauliSum.from_text(Path(path).read_text())


def _fits(nqubits: int, cap: int) -> bool:
    return (1 << nqubits) <= cap


def cmd_telescope(args) -> int:
    started = time.perf_counter()
    circuit = read_circuit(args.circuit)
    forecast = budget_check(circuit, args.max_cardinality)
    records = []
    t = TelescopeObjective.start(circuit, max_cardinality=args.max_cardinality)
    certifiable = _fits(circuit.n, args.dense_cap)
    try:
        for k in range(len(circuit) + 1):
            if k:
                t = extend(t)
            rec = {"k": t.k, "cardinality": t.cardinality}
            if certifiable:
                cert = certify(t, cap=args.dense_cap)
                rec.update(gap=cert.gap, ground_overlap=cert.ground_overlap,
                           circuit_energy=cert.circuit_energy)
                if abs(cert.gap - 1.0) > 1e-8 or cert.ground_overlap < 1 - OVERLAP_TOL:
                    raise CertificationFailure(f"telescope certification failed at k={t.k}: {rec}")
            records.append(rec)
    except CardinalityBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"forecast: bound={forecast.bound} cap={forecast.max_cardinality} "
              f"non_clifford={forecast.non_clifford}", file=sys.stderr)
        return EXIT_CAP
    if args.out:
        Path(args.out).write_text(t.h.to_text(header=f"telescope of {args.circuit}, k={t.k}"))
    if args.report:
        env = _envelope(args, {"circuit": args.circuit}, {"forecast_bound": forecast.bound,
                                                          "certified": certifiable}, started)
        lines = [json.dumps({"header": env}, sort_keys=True)]
        lines += [json.dumps(r, sort_keys=True) for r in records]
        Path(args.report).write_text("\n".join(lines) + "\n")
    last = records[-1]
    print(json.dumps(last, sort_keys=True))
    return EXIT_OK


def cmd_clock(args) -> int:
    started = time.perf_counter()
    circuit = read_circuit(args.circuit)
    sys_ = ClockSystem.from_circuit(circuit, J=args.J, K_weight=args.K, padding=args.pad)
    if not _fits(sys_.total_qubits, args.dense_cap):
        raise CapExceeded(f"{sys_.total_qubits} qubits exceed dense cap {args.dense_cap}")
    h = build_objective(sys_)
    cert = certify_clock(sys_, h, cap=args.dense_cap)
    check = check_gap_bound(sys_, cert.gap)
    result = cert.as_dict()
    result.update(source_length=sys_.source_length, padding=sys_.padding,
                  gap_bound_holds=check.holds, gap_bound_violation=check.violation_report(),
                  padding_predicted=None, padding_measured=None)
    if args.pad:
        pad = pad_and_project(sys_, args.pad, build=False)
        result.update(padding_predicted=pad.predicted, padding_measured=pad.measured)
    if args.out:
        Path(args.out).write_text(h.to_text(header=f"clock objective of {args.circuit}"))
    _write_json(args.report, _envelope(args, {"circuit": args.circuit}, result, started))
    print(json.dumps({k: result[k] for k in ("L", "clock_qubits", "cardinality", "gap",
                                             "ground_overlap_with_history")}, sort_keys=True))
    if cert.degenerate or cert.ground_overlap_with_history < 1 - OVERLAP_TOL:
        print("error: history state is not the unique ground state", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def _ansatz(args, n: int) -> AnsatzSpec:
    circuit = read_circuit(args.circuit) if args.circuit else None
    if circuit is not None and circuit.n < n:
        from .circuit import Circuit

        circuit = Circuit(n, circuit.gates, circuit.name)
    return AnsatzSpec(args.ansatz, n, args.depth, args.geometry, circuit)


def cmd_optimize(args) -> int:
    started = time.perf_counter()
    h = _read_pauli(args.objective)
    spec = _ansatz(args, h.n)
    init = None
    if args.ansatz == "circuit_shaped" and args.seed_from_circuit:
        init = spec.circuit.parameters
    run_ = minimize(h, spec, args.delta, budget=args.budget, seed=args.seed, init=init,
                    shots=args.shots)
    result = run_.as_dict()
    result.update(ansatz=args.ansatz, geometry=args.geometry, depth=args.depth,
                  num_parameters=spec.num_parameters)
    if args.shots:
        result["shot_rule"] = "per-word shots as given by --shots; Hoeffding rule: " \
            "N = ceil(2 ln(2m/delta) (m max|c|)^2 / eps^2)"
    inputs = {"objective": args.objective}
    if args.circuit:
        inputs["circuit"] = args.circuit
    _write_json(args.report, _envelope(args, inputs, result, started))
    print(json.dumps({"best_value": run_.best_value, "accepted": run_.accepted,
                      "evaluations": run_.evaluations}, sort_keys=True))
    return EXIT_OK if run_.accepted else EXIT_REJECT


def cmd_arealaw(args) -> int:
    started = time.perf_counter()
    res = sweep(args.geometry, args.n, args.depth, args.draws, seed=args.seed, family=args.family)
    payload = res.as_dict()
    _write_json(args.report, _envelope(args, {}, payload, started))
    print(json.dumps({"bound": res.bound, "two_qubit_depth": res.two_qubit_depth,
                      "max_rank_ebits": float(res.max_rank_per_cut.max(initial=0.0)),
                      "violations": res.violations}, sort_keys=True))
    return EXIT_OK if res.violations == 0 else EXIT_CERT


def cmd_verify(args) -> int:
    started = time.perf_counter()
    h = _read_pauli(args.objective)
    witness = read_circuit(args.witness)
    if witness.n < h.n:
        from .circuit import Circuit

        witness = Circuit(h.n, witness.gates, witness.name)
    if not _fits(h.n, args.dense_cap):
        raise CapExceeded(f"{h.n} qubits exceed dense cap {args.dense_cap}")
    from .simulator import spectral_report

    rep = spectral_report(h, cap=args.dense_cap)
    res = witness_check(h, witness, args.delta, report=rep)
    result = res.as_dict()
    result["degenerate"] = rep.degenerate
    if args.eps:
        result["hoeffding_shots_per_term"] = shots_per_term(h, args.eps, args.delta_fail)
    _write_json(args.report, _envelope(args, {"objective": args.objective,
                                              "witness": args.witness}, result, started))
    print(json.dumps({"energy": res.energy, "accepted": res.accepted,
                      "overlap_lower": res.lower, "overlap_upper": res.upper}, sort_keys=True))
    return EXIT_OK if res.accepted else EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--dense-cap", type=int, default=EIG_DIM_CAP,
                        help="largest matrix dimension handed to the eigensolver")
    shared.add_argument("--out", help="write the objective in Pauli text format")
    shared.add_argument("--report", help="write a JSON report")
    shared.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="uvqc", description=__doc__)
    p.add_argument("--version", action="version", version=f"uvqc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("telescope", parents=[shared], help="telescoping objective of a circuit")
    t.add_argument("--circuit", required=True)
    t.add_argument("--max-cardinality", type=int, default=DEFAULT_MAX_CARDINALITY)
    t.set_defaults(func=cmd_telescope)

    c = sub.add_parser("clock", parents=[shared], help="history-state objective of a circuit")
    c.add_argument("--circuit", required=True)
    c.add_argument("--J", type=float, default=1.0)
    c.add_argument("--K", type=float, default=1.0)
    c.add_argument("--pad", type=int, default=0)
    c.set_defaults(func=cmd_clock)

    o = sub.add_parser("optimize", parents=[shared], help="minimise an objective over an ansatz")
    o.add_argument("--objective", required=True)
    o.add_argument("--ansatz", default="hardware_efficient",
                   choices=["hardware_efficient", "brick_layer", "circuit_shaped"])
    o.add_argument("--geometry", default="line", choices=["line", "ring", "grid"])
    o.add_argument("--depth", type=int, default=1)
    o.add_argument("--circuit", help="circuit for the circuit_shaped ansatz")
    o.add_argument("--seed-from-circuit", action="store_true",
                   help="start circuit_shaped runs at the circuit's own angles")
    o.add_argument("--delta", type=float, default=1.0)
    o.add_argument("--budget", type=int, default=5000)
    o.add_argument("--shots", type=int, default=0)
    o.set_defaults(func=cmd_optimize)

    a = sub.add_parser("arealaw", parents=[shared], help="random-parameter ebit sweep")
    a.add_argument("--geometry", default="line", choices=["line", "ring", "grid"])
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--depth", type=int, required=True)
    a.add_argument("--draws", type=int, default=1000)
    a.add_argument("--family", default="brick_layer",
                   choices=["brick_layer", "hardware_efficient"])
    a.set_defaults(func=cmd_arealaw)

    v = sub.add_parser("verify", parents=[shared], help="check a witness circuit against an objective")
    v.add_argument("--objective", required=True)
    v.add_argument("--witness", required=True)
    v.add_argument("--delta", type=float, default=None,
                   help="acceptance threshold (default: certified gap)")
    v.add_argument("--eps", type=float, default=None,
                   help="also report the Hoeffding shots per word for this tolerance")
    v.add_argument("--delta-fail", type=float, default=0.01)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    args.argv = ["uvqc", *argv]
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (DimensionError, ClockWidthError, CardinalityBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (CircuitError, AnsatzError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DegenerateGroundState, CertificationFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CERT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
