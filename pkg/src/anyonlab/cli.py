"""Command-line front end: reproducible runs with machine-readable outputs.

Subcommands: ground, braid-demo, toric, spectrum, sweep.  Reports are
deterministic JSON/CSV (see report module); every report gets a sidecar
``*.manifest.json`` recording command, effective config, seed, versions
and timestamp.  Relative output paths resolve against $ANYONLAB_OUT_DIR.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import anyon, report, spectrum
from .dense import (DEFAULT_DENSE_LIMIT, StateVector, dump_amplitudes, run,
                    state_from_dump)
from .lattice import (build_planar6, build_toric, describe_model,
                      ground_state_circuit, planar6_graph_spec, syndrome)
from .pauli import PauliString
from .tableau import Tableau, init_toric_ground, syndrome_sweep


def _parse_model(text: str):
    if text == "planar6":
        return build_planar6()
    if text.startswith("torus:"):
        return build_toric(int(text.split(":", 1)[1]))
    raise ValueError(f"unknown model {text!r}; use planar6 or torus:K")


def _parse_grid(text: str) -> list[float]:
    """Comma list ("0,0.1") or inclusive range ("start:stop:step")."""
    if ":" in text:
        start, stop, step = (float(tok) for tok in text.split(":"))
        if step <= 0:
            raise ValueError(f"grid step must be positive: {text!r}")
        count = int(round((stop - start) / step))
        grid = [start + i * step for i in range(count + 1)]
        if not grid or grid[-1] > stop + 1e-12:
            raise ValueError(f"empty grid: {text!r}")
        return grid
    grid = [float(tok) for tok in text.split(",") if tok.strip()]
    if not grid:
        raise ValueError(f"empty grid: {text!r}")
    return grid


def _syndrome_rows(entries):
    return [{"generator": e.generator, "value": e.value, "eigenstate": e.eigenstate}
            for e in entries]


def _tableau_for_circuit(n: int, circuit) -> Tableau:
    t = Tableau(n)
    for g in circuit.gates:
        t.apply_gate(g.kind, g.targets)
    return t


# -- ground ------------------------------------------------------------------


def cmd_ground(args) -> int:
    model = _parse_model(args.model)
    out: dict = {"model": args.model, "backend": args.backend,
                 "n_qubits": model.n_qubits,
                 "generators": [str(g) for g in model.generators],
                 "generator_ids": list(model.generator_ids)}
    if args.backend == "dense":
        if model.n_qubits > args.dense_limit:
            raise ValueError(
                f"dense backend refuses {model.n_qubits} qubits "
                f"(limit {args.dense_limit}); use --backend tableau")
        if model.geometry == "planar6":
            state = run(ground_state_circuit(planar6_graph_spec()),
                        StateVector.zero(6))
        else:
            state = init_toric_ground(model, tuple(args.logical),
                                      seed=args.seed).to_statevector(args.dense_limit)
        out["amplitudes"] = dump_amplitudes(state)
        out["syndrome"] = _syndrome_rows(syndrome(model, state))
    else:
        if model.geometry == "planar6":
            t = _tableau_for_circuit(6, ground_state_circuit(planar6_graph_spec()))
        else:
            t = init_toric_ground(model, tuple(args.logical), seed=args.seed)
        out["tableau_rows"] = [str(p) for p in t.stabilizer_paulis()]
        out["syndrome"] = [{"generator": gid, "value": val, "eigenstate": True}
                           for gid, val in syndrome_sweep(t, model)]
    if args.describe:
        out["description"] = describe_model(model)
    path = report.write_report(args.out, out)
    report.write_manifest(path, "ground", {"model": args.model,
                                           "backend": args.backend,
                                           "logical": list(args.logical)},
                          args.seed, [path])
    print(f"wrote {path}")
    return 0


# -- braid-demo ----------------------------------------------------------------


def _stage_dump(run_):
    return {name: dump_amplitudes(state) for name, state in run_.states.items()}


def cmd_braid_demo(args) -> int:
    config = anyon.ExperimentConfig(
        with_braiding=not args.no_braid, eta_inject=args.eta,
        admix_beta=args.admix, gamma_leak=args.gamma, damping=args.damping)
    sys_ = spectrum.load_spin_system(args.spin_config) if args.spin_config \
        else spectrum.default_spin_system(t2_s=args.t2)
    model = build_planar6()
    result = anyon.run_experiment(config, sys_, seed=args.seed)

    out: dict = {"config": {**config.as_dict(), "seed": args.seed},
                 "spin_system": sys_.as_dict()}
    unb = result["unbraided"]
    out["unbraided"] = {
        "states": _stage_dump(unb["run"]),
        "syndrome_initial": _syndrome_rows(syndrome(model, unb["run"].states["psi_f"])),
        "spectrum": unb["spectrum"].as_dict(),
    }
    if "braided" in result:
        br = result["braided"]
        out["braided"] = {
            "states": _stage_dump(br["run"]),
            "syndrome_after_creation": _syndrome_rows(
                syndrome(model, br["run"].states["psi_b"])),
            "spectrum": br["spectrum"].as_dict(),
        }
        out["phase"] = result["phase"].as_dict()
    if config.eta_inject == 0 and config.admix_beta == 0 and config.gamma_leak == 0:
        out["ideal_fidelities"] = anyon.ideal_fidelities()

    path = report.write_report(args.out, out)
    report.write_manifest(path, "braid-demo", out["config"], args.seed, [path])
    print(f"wrote {path}")
    if "phase" in out:
        p = result["phase"]
        print(f"eta = {p.eta:.6f}  delta = {p.delta / math.pi:.6f} pi "
              f"ratios = ({p.beta_over_alpha:.4f}, {p.alphap_over_betap:.4f})")
    return 0


# -- toric ---------------------------------------------------------------------


def _parse_errors(text: str, model, rng) -> list[tuple[str, tuple]]:
    """Error spec: comma-separated "x:h:R:C", "z:v:R:C", "rand-x:N",
    "rand-z:N", or "rand:N" tokens."""
    errors = []
    if not text:
        return errors
    bonds = sorted(model.qubit_layout)
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        parts = token.split(":")
        if parts[0] in ("rand-x", "rand-z", "rand"):
            count = int(parts[1])
            for _ in range(count):
                kind = parts[0].removeprefix("rand-") if parts[0] != "rand" \
                    else ("x" if rng.integers(0, 2) == 0 else "z")
                bond = bonds[rng.integers(0, len(bonds))]
                errors.append((kind, bond))
        elif parts[0] in ("x", "z") and len(parts) == 4:
            bond = (parts[1], int(parts[2]), int(parts[3]))
            if bond not in model.qubit_layout:
                raise ValueError(f"unknown bond {bond} in error spec {token!r}")
            errors.append((parts[0], bond))
        else:
            raise ValueError(f"bad error token {token!r}")
    return errors


def cmd_toric(args) -> int:
    model = build_toric(args.k)
    rng = np.random.default_rng(args.seed)
    t_init0 = time.perf_counter()
    t = init_toric_ground(model, tuple(args.logical), seed=args.seed)
    init_s = time.perf_counter() - t_init0

    errors = _parse_errors(args.errors, model, rng)
    for kind, bond in errors:
        q = model.qubit_layout[bond]
        p = PauliString.x_on(model.n_qubits, q) if kind == "x" \
            else PauliString.z_on(model.n_qubits, q)
        t.apply_pauli(p)

    t_sweep0 = time.perf_counter()
    sweep = syndrome_sweep(t, model)
    sweep_s = time.perf_counter() - t_sweep0

    n_vertex = len(model.vertex_ops)
    vertex_defects = sum(1 for _, v in sweep[:n_vertex] if v == -1)
    face_defects = sum(1 for _, v in sweep[n_vertex:] if v == -1)
    # no wall-clock numbers in the report itself: reruns stay byte-identical
    out = {"k": args.k, "n_qubits": model.n_qubits,
           "logical": list(args.logical),
           "errors": [{"kind": kind, "bond": list(bond)} for kind, bond in errors],
           "syndromes": [{"generator": gid, "value": val} for gid, val in sweep],
           "defect_counts": {"vertex": vertex_defects, "face": face_defects}}
    path = report.write_report(args.out, out)
    outputs = [path]
    bench = None
    if args.bench:
        reps = []
        for _ in range(5):
            b0 = time.perf_counter()
            syndrome_sweep(t, model)
            reps.append(time.perf_counter() - b0)
        bench = {"k": args.k, "n_qubits": model.n_qubits, "init_s": init_s,
                 "first_sweep_s": sweep_s,
                 "cached_sweep_s": sorted(reps)[len(reps) // 2]}
        outputs.append(report.write_report(str(path) + ".bench.json", bench))
    report.write_manifest(path, "toric", {"k": args.k, "errors": args.errors,
                                          "logical": list(args.logical)},
                          args.seed, outputs)
    print(f"wrote {path}")
    if bench:
        print(f"k={args.k}: init {bench['init_s']:.3f}s, first sweep "
              f"{bench['first_sweep_s']:.3f}s, cached sweep {bench['cached_sweep_s']:.4f}s")
    return 0


# -- spectrum --------------------------------------------------------------------


def cmd_spectrum(args) -> int:
    sys_ = spectrum.load_spin_system(args.spin_config) if args.spin_config \
        else spectrum.default_spin_system(t2_s=args.t2)
    if args.thermal:
        rep = spectrum.synthesize_thermal(sys_)
    else:
        if not args.state:
            raise ValueError("spectrum needs --state FILE or --thermal")
        with open(args.state, encoding="utf-8") as fh:
            rows = json.load(fh)
        rep = spectrum.synthesize(sys_, state_from_dump(rows), args.damping)
    if args.label:
        rep = spectrum.assign_peak_labels(rep, args.label)

    json_path = report.write_report(args.out + ".json", rep.as_dict())
    csv_path = report.write_text(args.out + ".csv", spectrum.spectrum_to_csv(rep))
    outputs = [json_path, csv_path]
    if args.lineshape:
        freqs, values = spectrum.sample_lineshape(rep, points=args.lineshape)
        outputs.append(report.write_text(args.out + ".lineshape.csv",
                                         spectrum.lineshape_to_csv(freqs, values)))
    report.write_manifest(json_path, "spectrum",
                          {"spin_config": args.spin_config, "thermal": args.thermal,
                           "state": args.state, "damping": args.damping,
                           "label": args.label}, None, outputs)
    print(f"wrote {', '.join(str(p) for p in outputs)}")
    return 0


# -- sweep -----------------------------------------------------------------------


def cmd_sweep(args) -> int:
    etas = _parse_grid(args.eta_grid)
    admixes = _parse_grid(args.admix_grid)
    sys_ = spectrum.load_spin_system(args.spin_config) if args.spin_config \
        else spectrum.default_spin_system()
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["eta_injected", "admix", "eta_recovered", "delta", "delta_over_pi"])
    for eta in etas:
        for r in admixes:
            config = anyon.ExperimentConfig(
                eta_inject=eta, admix_beta=r, gamma_leak=args.gamma,
                damping=args.damping)
            result = anyon.run_experiment(config, sys_, seed=args.seed)
            ph = result["phase"]
            writer.writerow([f"{eta:.12g}", f"{r:.12g}", f"{ph.eta:.12g}",
                             f"{ph.delta:.12g}",
                             f"{ph.delta / math.pi:.12g}"])
    path = report.write_text(args.out, buf.getvalue())
    report.write_manifest(path, "sweep",
                          {"eta_grid": args.eta_grid, "admix_grid": args.admix_grid,
                           "gamma": args.gamma, "damping": args.damping},
                          args.seed, [path])
    print(f"wrote {path} ({len(etas) * len(admixes)} rows)")
    return 0


# -- parser ------------------------------------------------------------------------


def _logical_bits(text: str) -> tuple[int, int]:
    if len(text) != 2 or any(ch not in "01" for ch in text):
        raise argparse.ArgumentTypeError(f"logical choice must be two bits, got {text!r}")
    return (int(text[0]), int(text[1]))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anyonlab",
        description="Kitaev lattice models, abelian anyon braiding, NMR-style readout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ground", help="prepare and dump a model ground state")
    p.add_argument("--model", default="planar6", help="planar6 or torus:K")
    p.add_argument("--backend", choices=("dense", "tableau"), default="dense")
    p.add_argument("--dense-limit", type=int, default=DEFAULT_DENSE_LIMIT)
    p.add_argument("--logical", type=_logical_bits, default=(0, 0),
                   help="two bits choosing the toric Z-loop sector")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--describe", action="store_true")
    p.add_argument("--out", default="ground.json")
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("braid-demo", help="run the braided/unbraided comparison")
    p.add_argument("--no-braid", action="store_true")
    p.add_argument("--eta", type=float, default=0.0, help="injected braiding phase error")
    p.add_argument("--admix", type=float, default=0.0, help="|beta/alpha| contamination")
    p.add_argument("--gamma", type=float, default=0.0, help="orthogonal error weight")
    p.add_argument("--damping", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t2", type=float, default=None, help="T2 in seconds (linewidth)")
    p.add_argument("--spin-config", default=None)
    p.add_argument("--out", default="braid_demo.json")
    p.set_defaults(func=cmd_braid_demo)

    p = sub.add_parser("toric", help="toric tableau with errors and syndrome sweep")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--errors", default="", help='e.g. "x:h:0:0,z:v:1:2,rand-x:5"')
    p.add_argument("--logical", type=_logical_bits, default=(0, 0))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sweep", action="store_true",
                   help="accepted for compatibility; the sweep always runs")
    p.add_argument("--bench", action="store_true", help="emit sweep timing table")
    p.add_argument("--out", default="syndromes.json")
    p.set_defaults(func=cmd_toric)

    p = sub.add_parser("spectrum", help="synthesize a label-qubit spectrum")
    p.add_argument("--spin-config", default=None)
    p.add_argument("--state", default=None, help="state dump JSON ([bits, re, im] rows)")
    p.add_argument("--thermal", action="store_true")
    p.add_argument("--damping", type=float, default=1.0)
    p.add_argument("--t2", type=float, default=None)
    p.add_argument("--label", choices=("braided", "unbraided"), default=None)
    p.add_argument("--lineshape", type=int, default=0,
                   help="also emit a sampled lineshape CSV with this many points")
    p.add_argument("--out", default="spectrum", help="output base path")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="eta-recovery sweep over parameter grids")
    p.add_argument("--eta-grid", default="0", help='"start:stop:step" or comma list')
    p.add_argument("--admix-grid", default="0")
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--damping", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spin-config", default=None)
    p.add_argument("--out", default="sweep.csv")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as err:
        print(json.dumps({"error": str(err)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
