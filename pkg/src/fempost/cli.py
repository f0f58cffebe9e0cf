"""Command-line entry point exposing every pipeline of the package.

Subcommands: decode, extract, synth, weibull-fit, hazard, truss-opt,
czm-identify, run.  Exit codes: 0 success, 1 usage error, 2 domain error.
All numeric report output uses 6 significant digits so golden-file tests
stay stable.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import czm, filcodec, gridio, jobs, records, truss, weibull

DEFAULT_SEED = 1234

#: Exceptions that signal a domain problem rather than bad usage.
DOMAIN_ERRORS = (
    filcodec.FilCodecError,
    records.MalformedRecord,
    records.OrphanStressRecord,
    weibull.DomainError,
    weibull.RankOutOfRange,
    weibull.NoConvergence,
    weibull.DegenerateFit,
    truss.SingularStiffness,
    truss.Infeasible,
    truss.NoConvergence,
    czm.NonPositiveInput,
    czm.DuplicateInputs,
    czm.BoxTooSmall,
    czm.NoConvergence,
    jobs.JobError,
    ValueError,
    OSError,
)


def _fmt(x) -> str:
    return f"{x:.6g}"


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_on_error_code if hasattr(self, "exit_on_error_code") else 1)


def _read_flat(path) -> str:
    if path == "-":
        return sys.stdin.read().replace("\r", "").replace("\n", "")
    return filcodec.fil_to_string(path)


def _out_stream(path):
    return sys.stdout if path in (None, "-") else open(path, "w")


def cmd_decode(args) -> int:
    stream = filcodec.decode_stream(_read_flat(args.input), lenient=args.lenient)
    out = _out_stream(args.output)
    for i, rec in enumerate(stream):
        attrs = ", ".join(
            _fmt(a) if isinstance(a, float) else repr(a) for a in rec.attributes
        )
        out.write(f"record {i}: key={rec.key} length={rec.length} attrs=[{attrs}]\n")
    out.write(f"total records: {len(stream)}\n")
    if out is not sys.stdout:
        out.close()
    return 0


def cmd_extract(args) -> int:
    stream = filcodec.decode_stream(_read_flat(args.input))
    key = args.key
    out = _out_stream(args.output)
    if key == records.KEY_NODES:
        records.extract_nodes(stream).to_csv(out)
    elif key == records.KEY_ELEMENTS:
        records.extract_elements(stream).to_csv(out)
    elif key in (records.KEY_DISPLACEMENTS, records.KEY_REACTIONS):
        records.extract_nodal_field(stream, key).to_csv(out)
    elif key == records.KEY_STRESS:
        records.extract_stresses(stream).to_csv(out)
    else:
        rows = records.extract_raw(stream, key)
        out.write("attributes\n")
        for attrs in rows:
            out.write(" ".join(
                _fmt(a) if isinstance(a, float) else str(a) for a in attrs
            ) + "\n")
    if out is not sys.stdout:
        out.close()
    return 0


def cmd_synth(args) -> int:
    """Generate a seeded fixture results file: node grid, elements, fields."""
    rng = np.random.default_rng(args.seed)
    side = max(int(np.ceil(np.sqrt(args.nodes))), 1)
    node_rows = []
    for nid in range(1, args.nodes + 1):
        i, j = divmod(nid - 1, side)
        node_rows.append((nid, (float(j), float(i))))
    recs = records.node_records(node_rows)

    n_elem = args.elements
    elem_rows = []
    for eid in range(1, n_elem + 1):
        i, j = divmod(eid - 1, max(side - 1, 1))
        n0 = i * side + j + 1
        conn = (n0, n0 + 1, n0 + side + 1, n0 + side)
        if max(conn) <= args.nodes:
            elem_rows.append((eid, "CPE4", conn))
    recs += records.element_records(elem_rows)

    disp_rows = [
        (nid, tuple(rng.normal(scale=0.01, size=2))) for nid, _ in node_rows
    ]
    recs += records.nodal_field_records(records.KEY_DISPLACEMENTS, disp_rows)

    stress_rows = [
        (eid, 1, tuple(rng.normal(scale=100.0, size=4))) for eid, _, _ in elem_rows
    ]
    recs += records.stress_records(stress_rows)

    text = filcodec.encode_stream(recs)
    if args.output in (None, "-"):
        sys.stdout.write(text + ("\n" if text else ""))
    else:
        filcodec.write_fil(recs, args.output)
    return 0


def _load_samples_csv(path):
    loads = []
    with open(path) as fh:
        fh.readline()
        for line in fh:
            line = line.strip()
            if line:
                loads.append(float(line.split(",")[0]))
    return weibull.rank_samples(loads)


def cmd_weibull_fit(args) -> int:
    fields = weibull.load_element_fields_csv(args.fields)
    samples = _load_samples_csv(args.samples)
    params, trace = weibull.fit_three_parameter(
        fields, samples, V0=args.v0, tol=args.tol, max_iter=args.max_iter
    )
    print(f"iterations: {len(trace)}")
    for i, (th, m, su) in enumerate(trace):
        print(f"iter {i}: sigma_th={_fmt(th)} m={_fmt(m)} sigma_u={_fmt(su)}")
    print(
        f"fitted: sigma_th={_fmt(params.sigma_th)} m={_fmt(params.m)} "
        f"sigma_u={_fmt(params.sigma_u)} V0={_fmt(params.V0)}"
    )
    return 0


def cmd_hazard(args) -> int:
    fields = weibull.load_element_fields_csv(args.fields)
    level = args.level if args.level is not None else fields[-1].load_level
    field = next((f for f in fields if f.load_level == level), None)
    if field is None:
        raise ValueError(f"no element field at load level {level}")
    params = weibull.WeibullParams(args.sigma_th, args.m, args.sigma_u, args.v0)
    pf, log_pf = weibull.hazard_map(field, params)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("element_index,Pf,log10_Pf\n")
            for i, (p, lp) in enumerate(zip(pf, log_pf)):
                fh.write(f"{i},{_fmt(p)},{_fmt(lp)}\n")
    if args.output:
        if not args.mesh:
            raise ValueError("--mesh is required for grid export")
        stream = filcodec.decode_stream(filcodec.fil_to_string(args.mesh))
        nodes = records.extract_nodes(stream)
        elements = records.extract_elements(stream)
        gridio.write_unstructured_grid(
            args.output, nodes, elements, "log10_Pf", log_pf
        )
    if not args.csv and not args.output:
        print("element_index,Pf,log10_Pf")
        for i, (p, lp) in enumerate(zip(pf, log_pf)):
            print(f"{i},{_fmt(p)},{_fmt(lp)}")
    return 0


def cmd_truss_opt(args) -> int:
    if args.config:
        problem, x0 = truss.load_problem(args.config)
    else:
        problem, x0 = truss.example_problem(), [0.0037, 0.0049]
    state, counts = truss.optimize_truss(problem, x0)
    print(f"areas: [{_fmt(state.areas[0])}, {_fmt(state.areas[1])}] m^2")
    print(
        f"displacements: ux={_fmt(state.displacements[0])} "
        f"uy={_fmt(state.displacements[1])} m"
    )
    print(
        f"member stresses: [{_fmt(state.member_stresses[0])}, "
        f"{_fmt(state.member_stresses[1])}] Pa"
    )
    print(f"weight: {_fmt(state.weight)} N")
    print(
        f"evaluations: objective={counts['objective']} "
        f"constraint={counts['constraint']}"
    )
    return 0


def cmd_czm_identify(args) -> int:
    config = czm.ForwardConfig()
    target = czm.load_target_csv(args.target, config)
    box = ((args.box[0], args.box[1]), (args.box[2], args.box[3]))
    params, history = czm.inverse_identify(
        target, box, config=config, tol=args.tol, seed=args.seed,
        max_outer=args.max_outer,
    )
    final = history[-1]
    print(
        f"Tc={_fmt(params.Tc)} Gamma_c={_fmt(params.Gamma_c)} "
        f"delta_c={_fmt(params.delta_c)} iterations={len(history)} "
        f"mismatch={_fmt(final.incumbent_mismatch)}"
    )
    print("iteration,Tc,Gamma_c,mismatch,best_mismatch")
    for i, step in enumerate(history):
        print(
            f"{i},{_fmt(step.params.Tc)},{_fmt(step.params.Gamma_c)},"
            f"{_fmt(step.mismatch)},{_fmt(step.incumbent_mismatch)}"
        )
    return 0


def cmd_run(args) -> int:
    spec = jobs.JobSpec(
        command_template=args.command,
        job_name=args.job,
        workdir=args.workdir,
        initial_wait=args.initial_wait,
        poll_interval=args.poll_interval,
        timeout=args.timeout,
        cleanup_suffixes=tuple(args.cleanup or ()),
    )
    fil = jobs.run_job(spec)
    print(fil)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fempost", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("decode", help="dump the logical records of a results file")
    p.add_argument("input", help="results file path, or - for stdin")
    p.add_argument("-o", "--output")
    p.add_argument("--lenient", action="store_true",
                   help="resynchronize on the next '*' after a garbled record")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("extract", help="extract one record key as a table")
    p.add_argument("input")
    p.add_argument("--key", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("synth", help="generate a seeded fixture results file")
    p.add_argument("--nodes", type=int, default=9)
    p.add_argument("--elements", type=int, default=4)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("weibull-fit", help="calibrate three-parameter Weibull statistics")
    p.add_argument("--fields", required=True, help="CSV: load_level,element_id,sigma1,volume")
    p.add_argument("--samples", required=True, help="CSV: failure_load per row")
    p.add_argument("--v0", type=float, required=True, help="reference volume")
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--max-iter", type=int, default=100)
    p.set_defaults(func=cmd_weibull_fit)

    p = sub.add_parser("hazard", help="per-element failure probability map")
    p.add_argument("--fields", required=True)
    p.add_argument("--level", type=float, default=None)
    p.add_argument("--sigma-th", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--sigma-u", type=float, required=True)
    p.add_argument("--v0", type=float, required=True)
    p.add_argument("--mesh", help="results file carrying node/element records")
    p.add_argument("-o", "--output", help="legacy unstructured-grid output path")
    p.add_argument("--csv", help="CSV fallback output path")
    p.set_defaults(func=cmd_hazard)

    p = sub.add_parser("truss-opt", help="2-bar truss sizing optimization")
    p.add_argument("--config", help="JSON problem definition; omit for the built-in example")
    p.set_defaults(func=cmd_truss_opt)

    p = sub.add_parser("czm-identify", help="inverse cohesive parameter identification")
    p.add_argument("--target", required=True, help="CSV: cmod,load")
    p.add_argument("--box", type=float, nargs=4, metavar=("TC_LO", "TC_HI", "GC_LO", "GC_HI"),
                   default=[100.0, 300.0, 20.0, 100.0])
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--max-outer", type=int, default=10)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_czm_identify)

    p = sub.add_parser("run", help="launch a solver job and wait on its lock file")
    p.add_argument("--command", required=True, help="command template with {job}")
    p.add_argument("--job", required=True)
    p.add_argument("--workdir", default=".")
    p.add_argument("--initial-wait", type=float, default=0.5)
    p.add_argument("--poll-interval", type=float, default=0.1)
    p.add_argument("--timeout", type=float, default=30.0)
    p.add_argument("--cleanup", nargs="*", help="file suffixes to delete on success")
    p.set_defaults(func=cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        return args.func(args)
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
