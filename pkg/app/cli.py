"""
Batch interface for invariant complex Dirac structures on maximal flag manifolds.

Exit codes: 0 success or involutive, 1 not involutive, 2 invalid input,
3 disagreement between the rule table and the Nijenhuis oracle.
"""
import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional

from helpers.config import Config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_INVOLUTIVE = 1
EXIT_INVALID = 2
EXIT_DISAGREEMENT = 3


def _emit(payload: Any, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _config(args: argparse.Namespace) -> Config:
    return Config(
        tolerance=args.tolerance,
        enumeration_cap=args.cap,
        default_epsilon=args.epsilon,
        log_level=args.log_level,
        sweep_workers=args.workers,
        broker_url=args.broker_url,
        result_backend=args.result_backend,
        app_host=getattr(args, "host", None),
        app_port=getattr(args, "port", None),
        sentry_dsn=getattr(args, "sentry_dsn", None),
    )


def _fractions(values: Optional[List[str]]) -> Optional[tuple]:
    return None if values is None else tuple(Fraction(v) for v in values)


def cmd_roots(args, conf: Config) -> int:
    from controllers.RootSystemController import RootSystemController
    from models.algebra import CartanSpec
    from services.helper import roots_to_json

    controller = RootSystemController(conf)
    rs = controller.build_root_system(CartanSpec.parse(args.type))
    payload = roots_to_json(rs, controller.sum_triples(rs))
    lines = [f"{rs.spec.name}: {len(rs.positive_roots)} positive roots, {len(payload['triples'])} sum triples"]
    lines += [f"  {r['root']:<20} height {r['height']}" for r in payload["positive_roots"]]
    lines += [f"  {a} + {b} = {c}" for a, b, c in payload["triples"]]
    lines.append("  heights: " + ", ".join(f"d{h}={n}" for h, n in payload["heights"].items()))
    _emit(payload, args.json, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args, conf: Config) -> int:
    from api.metrics_routes import record_structure_verified
    from services import ClassificationService
    from services.helper import load_structure_file, verify_payload

    classification = ClassificationService(conf)
    structure = load_structure_file(args.file, conf.tolerance)
    payload = verify_payload(structure, args.method, classification.involutivity, classification.model)

    lines = [f"{payload['algebra']} ({args.method}): {'involutive' if payload['involutive'] else 'NOT involutive'}"]
    for v in payload["verdicts"]:
        tags = ",".join(c["case"] for c in v["cases"])
        status = "ok" if v["involutive"] else "fails"
        line = f"  {' + '.join(v['triple'][:2])} = {v['triple'][2]}  ({tags})  row {v['condition_id']}: {status}"
        if v["witness"]:
            line += f"  witness {v['witness']}"
        lines.append(line)
    report = payload["report"]
    lines.append(f"  real index {payload['real_index']}, order {report['order']}, type {report['type']}")
    if not payload["agree"]:
        lines.append("  deciders disagree")
    _emit(payload, args.json, "\n".join(lines))

    if args.method == "both" and not payload["agree"]:
        record_structure_verified(payload["algebra"], "disagreement")
        return EXIT_DISAGREEMENT
    record_structure_verified(payload["algebra"], "involutive" if payload["involutive"] else "not_involutive")
    return EXIT_OK if payload["involutive"] else EXIT_NOT_INVOLUTIVE


def cmd_construct(args, conf: Config) -> int:
    from controllers.RootSystemController import RootSystemController
    from models.algebra import CartanSpec
    from services import ClassificationService
    from services.helper import serialize_structure

    rs = RootSystemController(conf).build_root_system(CartanSpec.parse(args.type))
    if args.real_index % 2:
        raise ValueError(f"real index must be even, got {args.real_index}")
    structure = ClassificationService(conf).construct_with_real_index(rs, args.real_index // 2)
    payload = serialize_structure(structure)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, ensure_ascii=False)
            f.write("\n")
        logger.info(f"Wrote {rs.spec.name} structure of real index {args.real_index} to {args.out}")
    text = "\n".join(
        [f"{rs.spec.name}, real index {args.real_index}:"]
        + [f"  {root:<20} {str(structure.case(rs.root_by_name(root)))}" for root in payload["assignment"]]
    )
    _emit(payload, args.json, text)
    return EXIT_OK


def cmd_classify(args, conf: Config) -> int:
    from services import ClassificationService
    from services.helper import classify_payload, load_structure_file

    structure = load_structure_file(args.file, conf.tolerance)
    payload = classify_payload(structure, ClassificationService(conf), with_omega=args.with_omega)
    report = payload["report"]
    lines = [f"{payload['algebra']}:"]
    for entry in payload["roots"]:
        lines.append(
            f"  {entry['root']:<20} case {entry['case']['case']:<4} -> {entry['normal_form_text']}"
            f"  (real index {entry['real_index']}, order {entry['order']}, type {entry['type']})"
        )
    if payload["b_field"]:
        lines.append("  B-field: " + ", ".join(f"{r}: {b}" for r, b in payload["b_field"].items()))
    lines.append(
        f"  dim E={report['e']}, dim E∩Ē={report['e_cap_ebar']}, dim E+Ē={report['e_plus_ebar']}, "
        f"real index {report['real_index']}, order {report['order']}, type {report['type']}"
    )
    if "omega" in report:
        lines.append("  ω: " + ", ".join(f"{r}: {w:g}" for r, w in report["omega"].items()))
    _emit(payload, args.json, "\n".join(lines))
    return EXIT_OK


def _format_rows(columns: List[str], rows: List[List[Any]]) -> str:
    cells = [[str(c) for c in columns]] + [[json.dumps(c, ensure_ascii=False) if isinstance(c, list) else str(c)
                                             for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells)


def cmd_tables(args, conf: Config) -> int:
    from services import TableService

    tables = TableService(conf)
    which = args.which
    if which in ("integrability", "involutivity"):
        payload = tables.integrability() if which == "integrability" else tables.involutivity()
        text = _format_rows(payload["columns"], payload["rows"])
        if which == "integrability":
            text += "\nsigns in the complex row: " + "; ".join(payload["sign_combinations"])
            text += "\nsymplectic row also needs: " + "; ".join(payload["extra_condition"]["equations"])
    elif which.startswith("real-index-"):
        rows = tables.real_index_rows(int(which.rsplit("-", 1)[1]))
        payload = {"rows": rows}
        text = _format_rows(["L_α", "L_β", "L_{α+β}", "condition"],
                            [row["cases"] + [row["condition"]] for row in rows])
    else:
        generated = tables.generated(which, args.real_index)
        payload = {"algebra": which, "tables": {str(k): rows for k, rows in generated.items()}}
        parts = []
        for index, rows in generated.items():
            parts.append(f"real index {index}:")
            parts += [f"  {', '.join(r['cases'])}" + ("" if r["listed"] else "  (additional)") for r in rows]
        text = "\n".join(parts)
    _emit(payload, args.json, text)
    return EXIT_OK


def cmd_sweep(args, conf: Config) -> int:
    from celery_config import configure_celery
    from celery_tasks.tasks import dispatch_sweep
    from controllers.RootSystemController import RootSystemController
    from models.algebra import CartanSpec
    from services.ClassificationService import Grid

    rs = RootSystemController(conf).build_root_system(CartanSpec.parse(args.type))
    defaults = Grid()
    grid = Grid(
        cases=tuple(args.cases) if args.cases else defaults.cases,
        epsilons=tuple(args.epsilons) if args.epsilons else defaults.epsilons,
        ratios=_fractions(args.ratios) or defaults.ratios,
        xs=_fractions(args.xs) or defaults.xs,
        offsets=_fractions(args.offsets) or defaults.offsets,
    )
    configure_celery(conf)
    summary = dispatch_sweep(rs, grid, conf, real_index=args.real_index, method=args.method)
    payload = summary.to_json()
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as f:
            json.dump(payload["disagreements"], f, indent=2, ensure_ascii=False)
        logger.info(f"Wrote {len(summary.disagreements)} disagreements to {args.dump}")

    lines = [f"{rs.spec.name}: {summary.total} assignments, {summary.involutive} involutive, "
             f"agreement {summary.agreement_rate:.2%}"]
    for index, counts in payload["by_real_index"].items():
        lines.append(f"  real index {index}: {counts['involutive']}/{counts['total']} involutive")
    if summary.disagreements:
        lines.append(f"  {len(summary.disagreements)} assignments with disagreeing triples")
    _emit(payload, args.json, "\n".join(lines))
    if args.check_agreement and summary.disagreements:
        return EXIT_DISAGREEMENT
    return EXIT_OK


def cmd_serve(args, conf: Config) -> int:
    from main import run

    run(conf)
    return EXIT_OK


def cmd_worker(args, conf: Config) -> int:
    from celery_config import configure_celery

    if conf.eager:
        raise ValueError("a worker needs a real broker; pass --broker-url redis://...")
    app = configure_celery(conf)
    app.worker_main(["worker", f"--loglevel={conf.log_level}", f"--concurrency={conf.sweep_workers}"])
    return EXIT_OK


COMMANDS = {
    "roots": cmd_roots,
    "verify": cmd_verify,
    "construct": cmd_construct,
    "classify": cmd_classify,
    "tables": cmd_tables,
    "sweep": cmd_sweep,
    "serve": cmd_serve,
    "worker": cmd_worker,
}


def build_parser() -> argparse.ArgumentParser:
    from services.InvolutivityService import METHODS
    from services.TableService import TABLE_NAMES

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Machine-readable output on stdout")
    common.add_argument("--tolerance", type=float, help="Zero threshold for floating-point rank tests (1e-9)")
    common.add_argument("--cap", type=int, help="Maximum number of enumerated assignments (250000)")
    common.add_argument("--epsilon", type=int, choices=(1, -1), help="Sign of the complex-type planes in construct (+1)")
    common.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR"), help="Logging level (INFO)")
    common.add_argument("--workers", type=int, help="Number of sweep chunks (1)")
    common.add_argument("--broker-url", help="Celery broker; memory:// runs chunks in-process")
    common.add_argument("--result-backend", help="Celery result backend")
    common.add_argument("--metrics-out", help="Write Prometheus metrics to this file on exit")

    parser = argparse.ArgumentParser(prog="flag-dirac", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", parents=[common], help="Positive roots, heights and sum triples")
    p.add_argument("type", help="Cartan type such as A2, B3, G2")

    p = sub.add_parser("verify", parents=[common], help="Decide involutivity of a structure file")
    p.add_argument("file")
    p.add_argument("--method", choices=METHODS, default="both")

    p = sub.add_parser("construct", parents=[common], help="Involutive structure with a given real index")
    p.add_argument("type")
    p.add_argument("--real-index", type=int, required=True, help="Even real index 2k with 0 <= k <= number of positive roots")
    p.add_argument("--out", help="Write the structure file here")

    p = sub.add_parser("classify", parents=[common], help="B-normal forms and subspace data of a structure file")
    p.add_argument("file")
    p.add_argument("--with-omega", action="store_true", help="Include the imaginary part of the 2-form")

    p = sub.add_parser("tables", parents=[common], help="Stored and generated involutivity tables")
    p.add_argument("which", choices=TABLE_NAMES)
    p.add_argument("--real-index", type=int, help="Restrict generated tables to one real index")

    p = sub.add_parser("sweep", parents=[common], help="Compare both deciders over a parameter grid")
    p.add_argument("type")
    p.add_argument("--cases", nargs="+", help="Per-root cases to enumerate")
    p.add_argument("--epsilons", nargs="+", type=int, help="Signs for case 3")
    p.add_argument("--ratios", nargs="+", help="Ratios b1/a1 for case 4.1")
    p.add_argument("--xs", nargs="+", help="Values of x for case 4.2")
    p.add_argument("--offsets", nargs="+", help="Values of a for case 4.2")
    p.add_argument("--real-index", type=int, help="Keep only assignments of this real index")
    p.add_argument("--method", choices=METHODS, default="both")
    p.add_argument("--check-agreement", action="store_true", help="Exit 3 on any disagreement")
    p.add_argument("--dump", help="Write the disagreements to this file")

    p = sub.add_parser("serve", parents=[common], help="Run the HTTP API")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--sentry-dsn")

    sub.add_parser("worker", parents=[common], help="Run a Celery worker for distributed sweeps")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        conf = _config(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID

    logging.basicConfig(
        level=getattr(logging, conf.log_level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler()]
    )

    from services.ClassificationService import EnumerationCapExceeded
    from services.helper import StructureFileError

    try:
        code = COMMANDS[args.command](args, conf)
    except StructureFileError as e:
        for diagnostic in e.diagnostics:
            print(f"error: {diagnostic}", file=sys.stderr)
        code = EXIT_INVALID
    except EnumerationCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_INVALID
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_INVALID
    except Exception as e:
        logger.error(f"Unexpected failure in {args.command}: {e}", exc_info=True)
        code = EXIT_INVALID

    if args.metrics_out:
        from api.metrics_routes import write_metrics

        write_metrics(args.metrics_out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
