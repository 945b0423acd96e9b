#!/usr/bin/env python3
"""
lindfrag CLI
============
Fragment analysis of Pauli-Lindblad models: fragment enumeration, frustration
graphs, effective generators, non-Hermitian Ising chains, spectral statistics,
Loschmidt echoes and brute-force verification.

Usage:
    lindfrag validate  (--builtin NAME --n N | --model FILE)
    lindfrag fragments (--builtin NAME --n N | --model FILE) [--histogram]
    lindfrag graph     (--builtin NAME --n N | --model FILE) [--seed S] [--dot FILE]
    lindfrag effective (--builtin NAME --n N | --model FILE) --seed S [--component I]
    lindfrag tfim      --M M --zeta ZL ZR (--theta T | --J J --kappa K) [--pbc]
    lindfrag spectrum  (--builtin NAME --n N | --model FILE) --seed S
    lindfrag stats     --in spectrum.csv
    lindfrag echo      (MODEL --seed-op S | --M M --zeta ZL ZR) [--theta T]
    lindfrag rmt       --n N --chi X [X ...] --samples S --seed SEED
    lindfrag oracle    (--builtin NAME --n N | --model FILE) [--check all]
    lindfrag --help

Exit codes: 0 success, 1 validation or verification failure, 2 numerical
failure, 64 usage error.
"""
import argparse
import csv
import io
import json
import logging
import os
import sys
from enum import Enum
from pathlib import Path

import numpy as np

from errors import DimensionError, ModelError, NumericalError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_NUMERICAL = 2
EXIT_USAGE = 64

THREADS_ENV = "LINDFRAG_THREADS"

# subcommands that cannot run without a model
MODEL_COMMANDS = {"validate", "fragments", "graph", "effective", "spectrum", "oracle"}

logger = logging.getLogger("lindfrag")


class LindfragParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_USAGE."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_float(value):
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}")
    if not number > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return number


def _positive_int(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}")
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return number


def _unit_interval(value):
    number = _positive_float(value)
    if number > 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1], got {value}")
    return number


def build_parser():
    common = LindfragParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    common.add_argument("--config", help="Settings YAML overriding the packaged defaults")
    common.add_argument("--real-tol", type=_positive_float, help="Relative threshold for real eigenvalues")
    common.add_argument("--threads", type=_positive_int, help=f"Worker threads (default ${THREADS_ENV} or 1)")
    common.add_argument("-o", "--out", help="Write the output here instead of stdout")

    model = LindfragParser(add_help=False)
    source = model.add_mutually_exclusive_group()
    source.add_argument("--builtin", choices=["cluster_y", "cluster_ziz"], help="Reference model")
    source.add_argument("--model", help="Model file (JSON or YAML)")
    model.add_argument("--n", type=int, help="Number of qubits for --builtin")
    model.add_argument("--J", type=float, help="Set every Hamiltonian coefficient")
    model.add_argument("--kappa", type=float, help="Set every jump rate")
    model.add_argument("--theta", type=float, help="J = cos(theta pi/2), kappa = sin(theta pi/2)")

    seeded = LindfragParser(add_help=False)
    seeded.add_argument("--seed", help="Tilde-basis Pauli string inside the fragment, e.g. 'ZXY I XYXY'")
    seeded.add_argument("--fragment", help="Fragment label text, e.g. 'iZ..Iz'")
    seeded.add_argument("--physical", action="store_true", help="Read --seed in the physical basis")

    parser = LindfragParser(
        prog="lindfrag",
        description="Fragmentation and effective dynamics of Pauli-Lindblad models",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  lindfrag fragments --builtin cluster_ziz --n 8 --histogram
  lindfrag oracle --builtin cluster_y --n 4 --check all
  lindfrag tfim --M 20 --zeta 1 1 --theta 0.45
  lindfrag effective --builtin cluster_y --n 8 --seed "ZXY I XYXY" --format json
  lindfrag rmt --n 256 --chi 0 0.5 1 2 --samples 20 --seed 7
        """,
    )
    parser.add_argument("--version", action="version", version="lindfrag 0.1.0")
    subparsers = parser.add_subparsers(dest="command")

    p = subparsers.add_parser("validate", parents=[common, model], help="Validate a model")
    _add_format(p, default="table")

    p = subparsers.add_parser("fragments", parents=[common, model, seeded], help="Enumerate fragments")
    p.add_argument("--histogram", action="store_true", help="Fragment counts per size")
    _add_format(p)

    p = subparsers.add_parser("graph", parents=[common, model, seeded], help="Frustration graph")
    p.add_argument("--dot", help="Write the graph in DOT format to this file")
    _add_format(p, default="table")

    p = subparsers.add_parser("effective", parents=[common, model, seeded], help="Effective generator")
    p.add_argument("--component", type=int, help="Restrict to this subsystem component (0-based)")
    p.add_argument("--ising", action="store_true", help="Ising chain of a ZIZ subsystem (needs --component)")
    p.add_argument("--matrix", help="Write the generator as i,j,re,im triplets to this file")
    _add_format(p, extra=("table",))

    p = subparsers.add_parser("tfim", parents=[common], help="Open non-Hermitian Ising chain")
    _add_chain_arguments(p, required=True)
    p.add_argument("--pbc", action="store_true", help="Bulk dispersion on --points momenta in [0, pi]")
    p.add_argument("--points", type=_positive_int, default=64)
    p.add_argument("--ep-step", type=_unit_interval, help="Scan theta on this step for exceptional points")
    _add_format(p)

    p = subparsers.add_parser("spectrum", parents=[common, model, seeded], help="Fragment spectrum")
    p.add_argument("--component", type=int, help="Restrict to this subsystem component (0-based)")
    _add_format(p)

    p = subparsers.add_parser("stats", parents=[common], help="Spectral statistics of a spectrum file")
    p.add_argument("--in", dest="input", required=True, help="CSV with columns re,im")
    p.add_argument("--keep-fraction", type=_unit_interval, help="Ellipse filter fraction")
    p.add_argument("--exclude-real", action="store_true", help="Eccentricity over nonreal eigenvalues only")
    p.add_argument("--ratios", help="Write the spacing ratios to this CSV")
    p.add_argument("--baseline", type=_positive_int, help="Poisson baseline from this many samples")
    p.add_argument("--seed", type=int, default=0, help="Seed of the Poisson baseline")
    _add_format(p)

    p = subparsers.add_parser("echo", parents=[common, model], help="Loschmidt echo")
    p.add_argument("--seed-op", help="Tilde-basis string to evolve")
    p.add_argument("--physical", action="store_true", help="Read --seed-op in the physical basis")
    p.add_argument("--component", type=int, help="Restrict to this subsystem component (0-based)")
    _add_chain_arguments(p, required=False, couplings=False)
    p.add_argument("--tmax", type=_positive_float, help="Final time (default tmax_over_J / |J|)")
    p.add_argument("--steps", type=_positive_int, help="Number of time points")
    p.add_argument("--scan-step", type=_unit_interval, help="Regime scan over theta for the Ising chain")
    _add_format(p)

    p = subparsers.add_parser("rmt", parents=[common], help="Pseudo-Hermitian random matrices")
    p.add_argument("--n", type=_positive_int, required=True, help="Matrix size, a power of two")
    p.add_argument("--chi", type=float, nargs="+", required=True)
    p.add_argument("--samples", type=_positive_int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eigenvalues", help="Write eigenvalues of the first sample at the first chi")
    _add_format(p)

    p = subparsers.add_parser("oracle", parents=[common, model], help="Brute-force superoperator checks")
    p.add_argument(
        "--check", choices=["fragmentation", "conservation", "dense", "all"], default="all"
    )
    _add_format(p, default="table")

    return parser


def _add_format(p, default="csv", extra=()):
    choices = ["csv", "json", *extra]
    if default not in choices:
        choices.append(default)
    p.add_argument("--format", choices=choices, default=default, help=f"Output format (default {default})")


def _add_chain_arguments(p, required, couplings=True):
    p.add_argument("--M", dest="M", type=_positive_int, required=required, help="Pseudospins; the chain has M+1 sites")
    p.add_argument("--zeta", type=int, nargs=2, choices=[0, 1], default=[1, 1], metavar=("ZL", "ZR"))
    if couplings:
        p.add_argument("--theta", type=float, help="J = cos(theta pi/2), kappa = sin(theta pi/2)")
        p.add_argument("--J", type=float, default=None)
        p.add_argument("--kappa", type=float, default=None)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_OK
    _check_arguments(parser, args)
    _configure_logging(args.verbose)

    from config import activate_settings
    try:
        _apply_settings(args)
        return COMMANDS[args.command](args)
    except ModelError as e:
        _print_error(e)
        return EXIT_FAILED
    except (NumericalError, DimensionError) as e:
        _print_error(e)
        return EXIT_NUMERICAL
    finally:
        activate_settings(None)


def _check_arguments(parser, args):
    """Flag combinations argparse cannot express; all reported as usage errors."""
    has_model = getattr(args, "builtin", None) or getattr(args, "model", None)
    if args.command in MODEL_COMMANDS and not has_model:
        parser.error(f"{args.command} needs --builtin NAME --n N or --model FILE")
    if getattr(args, "builtin", None) and args.n is None:
        parser.error("--builtin needs --n")
    if getattr(args, "theta", None) is not None and (args.J is not None or args.kappa is not None):
        parser.error("--theta replaces --J/--kappa; give one or the other")
    if args.command in ("effective", "spectrum") and not (args.seed or args.fragment):
        parser.error(f"{args.command} needs --seed or --fragment")
    if getattr(args, "fragment", None) and args.seed:
        parser.error("give --seed or --fragment, not both")
    if args.command == "effective" and args.ising and args.component is None:
        parser.error("--ising needs --component")
    if args.command == "echo":
        if has_model and not args.seed_op:
            parser.error("echo on a model needs --seed-op")
        if not has_model and args.M is None:
            parser.error("echo needs a model with --seed-op, or an Ising chain with --M")
        if args.scan_step and has_model:
            parser.error("--scan-step applies to the Ising chain (--M) only")
    if args.threads is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            args.threads = _positive_int(raw)
        except argparse.ArgumentTypeError as e:
            parser.error(f"${THREADS_ENV}: {e}")


def _configure_logging(verbose):
    from rich.console import Console
    from rich.logging import RichHandler

    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _apply_settings(args):
    from config import activate_settings, load_settings

    settings = load_settings(Path(args.config)) if args.config else load_settings()
    if args.real_tol is not None:
        tolerances = settings.tolerances.model_copy(update={"real_tol": args.real_tol})
        settings = settings.model_copy(update={"tolerances": tolerances})
    activate_settings(settings)


def _print_error(error):
    from rich.console import Console
    from rich.text import Text

    Console(stderr=True).print(Text.assemble(("error: ", "bold red"), str(error)))


# --- Output ---

def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, Enum):
        return value.value
    return str(value)


def _csv_text(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def _json_default(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    return str(value)


def _json_text(data):
    return json.dumps(data, indent=2, default=_json_default) + "\n"


def _emit(args, text):
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {args.out}")
    else:
        sys.stdout.write(text)


def _write_file(path, text):
    Path(path).write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")


def _complex_rows(values):
    return [(float(v.real), float(v.imag)) for v in np.asarray(values, dtype=complex)]


# --- Model and fragment input ---

def _couplings(args):
    """(J, kappa) overrides from --theta or --J/--kappa; None leaves a value alone."""
    from tfim import theta_couplings

    if args.theta is not None:
        return theta_couplings(args.theta)
    return args.J, args.kappa


def _load_model(args):
    from config import load_model_file
    from models import builtin, from_config

    J, kappa = _couplings(args)
    if args.builtin:
        return builtin(
            args.builtin, args.n,
            J=1.0 if J is None else J,
            kappa=0.5 if kappa is None else kappa,
        )
    model = from_config(load_model_file(Path(args.model)))
    if J is not None or kappa is not None:
        model = model.with_couplings(J=J, kappa=kappa)
    return model


def _load_tilde(args):
    from models import require_valid, to_tilde

    model = _load_model(args)
    require_valid(model)
    return to_tilde(model)


def _parse_seed(tilde, text, physical):
    from pauli import PauliString

    p = PauliString.from_text(text)
    return tilde.to_tilde_string(p) if physical else p


def _load_fragment(tilde, args, seed_text=None):
    """Fragment named by --fragment, or the one containing the seed; None when neither is given."""
    from fragments import Fragment, fragment_of, labels_from_text

    seed_text = seed_text if seed_text is not None else getattr(args, "seed", None)
    if getattr(args, "fragment", None):
        try:
            labels = labels_from_text(args.fragment)
        except ValueError as e:
            raise ModelError(f"bad fragment label text {args.fragment!r}: {e}") from e
        return Fragment(tilde.n_qubits, labels=labels), None
    if seed_text:
        seed = _parse_seed(tilde, seed_text, args.physical)
        return fragment_of(tilde, seed), seed
    return None, None


def _component(tilde, fragment, index):
    from frustration import build_graph, subsystem_components

    if index is None:
        return None
    components = subsystem_components(build_graph(tilde, fragment))
    if not 0 <= index < len(components):
        raise ModelError(f"component {index} out of range; fragment has {len(components)}")
    return components[index]


def _vertex_name(v):
    return f"{v[0]}{v[1] + 1}"


# --- Subcommands ---

def cmd_validate(args):
    """Validate a model and report its tilde-basis layout."""
    from models import to_tilde, validate

    model = _load_model(args)
    report = validate(model)
    data = {"model": model.name or args.model, "n_qubits": model.n_qubits, **report.to_dict()}
    if report.is_valid:
        tilde = to_tilde(model)
        data.update({
            "generator_sites": list(tilde.generator_sites),
            "free_sites": list(tilde.free_sites),
            "single_generator": tilde.is_single_generator,
        })

    if args.format == "json":
        _emit(args, _json_text(data))
    elif args.format == "csv":
        rows = [("error", e) for e in report.errors] + [("warning", w) for w in report.warnings]
        _emit(args, _csv_text(["level", "message"], rows))
    else:
        from rich.console import Console
        from rich.panel import Panel
        from rich.text import Text

        console = Console()
        content = Text()
        content.append(f"{data['model']}: {model.n_qubits} qubits, "
                       f"{len(model.hamiltonian_terms)} terms, {len(model.jumps)} jumps\n")
        for e in report.errors:
            content.append(f"error: {e}\n", style="red")
        for w in report.warnings:
            content.append(f"warning: {w}\n", style="yellow")
        if report.is_valid:
            content.append(f"generator sites {data['generator_sites']}, free sites {data['free_sites']}\n",
                           style="dim")
        style = "green" if report.is_valid else "red"
        title = "VALID" if report.is_valid else "INVALID"
        console.print(Panel(content, title=title, border_style=style, expand=False))
    return EXIT_OK if report.is_valid else EXIT_FAILED


def cmd_fragments(args):
    """List fragments, one fragment, or the size histogram."""
    from fragments import count_by_size, enumerate_fragments, enumerate_reachable, total_count

    tilde = _load_tilde(args)
    fragment, _ = _load_fragment(tilde, args)

    if args.histogram:
        if tilde.is_single_generator:
            counts = count_by_size(tilde)
            rows = [(k, 1 << k, counts[k]) for k in sorted(counts)]
            data = {"total": total_count(tilde), "histogram": [
                {"k": k, "dim": d, "count": c} for k, d, c in rows
            ]}
            header = ["k", "dim", "count"]
        else:
            by_dim = {}
            for f in enumerate_reachable(tilde):
                by_dim[f.dim] = by_dim.get(f.dim, 0) + 1
            rows = sorted(by_dim.items())
            data = {"total": sum(by_dim.values()), "histogram": [
                {"dim": d, "count": c} for d, c in rows
            ]}
            header = ["dim", "count"]
        logger.info(f"{data['total']} fragments")
        text = _json_text(data) if args.format == "json" else _csv_text(header, rows)
        _emit(args, text)
        return EXIT_OK

    if fragment is not None:
        found = [fragment]
    elif tilde.is_single_generator:
        found = list(enumerate_fragments(tilde))
    else:
        found = enumerate_reachable(tilde)
    if args.format == "json":
        _emit(args, _json_text([f.to_dict() for f in found]))
    else:
        rows = [(f.label_text(), f.n_active, f.dim) for f in found]
        _emit(args, _csv_text(["label", "active_count", "dim"], rows))
    return EXIT_OK


def cmd_graph(args):
    """Frustration graph of the model or of one fragment."""
    from frustration import build_graph, find_claws, is_path, subsystem_components, summary, to_dot

    tilde = _load_tilde(args)
    fragment, _ = _load_fragment(tilde, args)
    graph = build_graph(tilde, fragment)
    if args.dot:
        _write_file(args.dot, to_dot(graph))

    components = subsystem_components(graph)
    rows = [
        (i, len(c), is_path(graph, c), " ".join(_vertex_name(v) for v in sorted(c)))
        for i, c in enumerate(components)
    ]
    info = summary(graph)
    if args.format == "json":
        info["claws"] = [
            {"center": _vertex_name(c.center), "leaves": [_vertex_name(v) for v in c.leaves]}
            for c in find_claws(graph)
        ]
        info["subsystems"] = [
            {"index": i, "size": n, "path": p, "vertices": v.split()} for i, n, p, v in rows
        ]
        _emit(args, _json_text(info))
    elif args.format == "csv":
        _emit(args, _csv_text(["component", "size", "is_path", "vertices"], rows))
    else:
        from rich.console import Console
        from rich.table import Table

        table = Table(title=f"{info['vertices']} vertices, {info['edges']} edges, {info['claws']} claws")
        table.add_column("#", justify="right")
        table.add_column("size", justify="right")
        table.add_column("path")
        table.add_column("vertices")
        for i, n, p, v in rows:
            table.add_row(str(i), str(n), "yes" if p else "no", v)
        Console().print(table)
    return EXIT_OK


def cmd_effective(args):
    """Effective generator of one fragment, optionally one subsystem of it."""
    from effective import restrict, ziz_tfim

    tilde = _load_tilde(args)
    fragment, _ = _load_fragment(tilde, args)
    subsystem = _component(tilde, fragment, args.component)
    gen = restrict(tilde, fragment, subsystem)
    spec = ziz_tfim(tilde, fragment, subsystem) if args.ising else None

    if args.matrix:
        coo = gen.sparse_matrix().tocoo()
        order = np.lexsort((coo.col, coo.row))
        rows = [(int(coo.row[i]), int(coo.col[i]), float(coo.data[i].real), float(coo.data[i].imag))
                for i in order]
        _write_file(args.matrix, _csv_text(["i", "j", "re", "im"], rows))

    terms = [(c, ops) for c, ops in gen.term_decomposition if c != 0]
    if args.format == "json":
        data = {
            "fragment": fragment.to_dict(),
            "active_sites": list(gen.active_sites),
            "dim": gen.dim,
            "constant_offset": gen.constant_offset if gen.explicit is None else None,
            "terms": [{"ops": ops, "coeff": [c.real, c.imag]} for c, ops in terms],
        }
        if spec is not None:
            data["ising"] = spec.to_dict()
        _emit(args, _json_text(data))
    elif args.format == "csv":
        _emit(args, _csv_text(["re", "im", "ops"], [(c.real, c.imag, ops) for c, ops in terms]))
    else:
        from rich.console import Console
        from rich.panel import Panel

        lines = gen.describe() if gen.explicit is None else [f"explicit block of dimension {gen.dim}"]
        if spec is not None:
            lines.append(f"Ising chain: {spec.n_sites} sites, zeta=({spec.zeta_L},{spec.zeta_R}), "
                         f"sector {spec.sector:+d}, offset {spec.offset:.6g}")
        Console().print(Panel("\n".join(lines), title=fragment.label_text(), expand=False))
    return EXIT_OK


def _chain_spec(args):
    from effective import TfimSpec

    J, kappa = _couplings(args)
    return TfimSpec(
        n_sites=args.M + 1,
        J=1.0 if J is None else J,
        kappa=0.5 if kappa is None else kappa,
        zeta_L=args.zeta[0],
        zeta_R=args.zeta[1],
    )


def cmd_tfim(args):
    """Open-chain spectrum, bulk band, or exceptional points of the Ising chain."""
    from tfim import bloch_matrix, exceptional_points, obc_spectrum, pbc_dispersion

    spec = _chain_spec(args)

    if args.ep_step:
        grid = np.arange(args.ep_step, 1.0, args.ep_step)
        points = exceptional_points(spec, grid)
        if args.format == "json":
            _emit(args, _json_text({"spec": spec.to_dict(), "exceptional_points": points}))
        else:
            _emit(args, _csv_text(["theta"], [(t,) for t in points]))
        return EXIT_OK

    if args.pbc:
        momenta = np.linspace(0.0, np.pi, args.points)
        energies = np.atleast_1d(pbc_dispersion(momenta, spec.J, spec.kappa))
        rows = []
        for k, eps in zip(momenta, energies):
            bloch = np.linalg.eigvals(bloch_matrix(k, spec.J, spec.kappa))
            residual = float(np.max(np.abs(bloch ** 2 - eps ** 2)))
            rows.append((float(k), float(eps.real), float(eps.imag), residual))
        if args.format == "json":
            _emit(args, _json_text({"spec": spec.to_dict(), "band": [
                {"k": k, "epsilon": [re, im], "bloch_residual": r} for k, re, im, r in rows
            ]}))
        else:
            _emit(args, _csv_text(["k", "re_eps", "im_eps", "bloch_residual"], rows))
        return EXIT_OK

    solution = obc_spectrum(spec)
    if args.format == "json":
        data = solution.to_dict()
        energy = solution.zero_mode_energy
        data["zero_mode"] = {
            "momentum": solution.zero_mode_momentum,
            "energy": energy,
            "abs_energy": None if energy is None else abs(energy),
        }
        _emit(args, _json_text(data))
    else:
        _emit(args, _csv_text(["re_k", "im_k", "re_eps", "im_eps"], solution.rows()))
    return EXIT_OK


def cmd_spectrum(args):
    """Eigenvalues of a fragment's effective generator."""
    from effective import restrict
    from spectra import eigendecompose

    tilde = _load_tilde(args)
    fragment, _ = _load_fragment(tilde, args)
    subsystem = _component(tilde, fragment, args.component)
    gen = restrict(tilde, fragment, subsystem)
    spectrum = eigendecompose(gen.matrix, source_tag=fragment.label_text())
    if args.format == "json":
        _emit(args, _json_text(spectrum.to_dict()))
    else:
        _emit(args, _csv_text(["re", "im"], _complex_rows(spectrum.eigenvalues)))
    return EXIT_OK


def cmd_stats(args):
    """Real fraction, eccentricity and spacing ratios of a stored spectrum."""
    from spectra import load_spectrum, poisson_baseline, spectrum_stats

    spectrum = load_spectrum(Path(args.input))
    stats = spectrum_stats(
        spectrum, keep_fraction=args.keep_fraction, exclude_real=args.exclude_real
    )
    data = stats.to_dict()
    if args.baseline:
        for key, ratios, dim in (("complex", stats.complex_ratios, 2), ("real", stats.real_ratios, 1)):
            if ratios.size:
                # the filter keeps about keep_fraction of each subset
                n_points = ratios.size if args.keep_fraction is None else int(round(ratios.size / args.keep_fraction))
                mean, err = poisson_baseline(
                    n_points, dim=dim, samples=args.baseline, seed=args.seed, keep_fraction=args.keep_fraction
                )
                data[f"poisson_{key}_mean"] = mean
                data[f"poisson_{key}_stderr"] = err

    if args.ratios:
        rows = [("complex", z.real, z.imag) for z in stats.complex_ratios]
        rows += [("real", float(z), 0.0) for z in stats.real_ratios]
        _write_file(args.ratios, _csv_text(["kind", "re", "im"], rows))

    if args.format == "json":
        _emit(args, _json_text(data))
    else:
        keys = [k for k in data if k != "filter"]
        _emit(args, _csv_text(keys, [[data[k] for k in keys]]))
    return EXIT_OK


def _echo_times(args, J):
    from config import load_settings

    echo = load_settings().echo
    scale = abs(J) if J else 1.0
    tmax = args.tmax if args.tmax is not None else echo.tmax_over_J / scale
    steps = args.steps if args.steps is not None else echo.steps
    return np.linspace(0.0, tmax, steps)


def cmd_echo(args):
    """Loschmidt echo of a seed operator, or of the all-up Ising state."""
    from dynamics import all_up_state, evolve_echo, largest_count_jump, scan_regimes

    if args.builtin or args.model:
        from effective import pseudospin_state, restrict

        tilde = _load_tilde(args)
        fragment, seed = _load_fragment(tilde, args, seed_text=args.seed_op)
        subsystem = _component(tilde, fragment, args.component)
        gen = restrict(tilde, fragment, subsystem)
        if fragment.labels is None:
            initial = np.zeros(gen.dim, dtype=complex)
            initial[fragment.index_of(seed)] = 1.0
        else:
            initial = pseudospin_state(fragment, seed, gen.active_sites)
        J = tilde.base.hamiltonian_terms[0][0] if tilde.base.hamiltonian_terms else 1.0
        series = evolve_echo(gen, initial, _echo_times(args, J))
    else:
        spec = _chain_spec(args)
        if args.scan_step:
            thetas = np.arange(args.scan_step, 1.0, args.scan_step)
            times = _echo_times(args, 1.0) if (args.tmax or args.steps) else None
            points = scan_regimes(spec, thetas, times, workers=args.threads)
            rows = [(p.theta, p.extrema, p.regime) for p in points]
            if args.format == "json":
                data = {"spec": spec.to_dict(), "scan": [
                    {"theta": t, "extrema": e, "regime": r} for t, e, r in rows
                ]}
                if len(points) > 1:
                    lo, hi, jump = largest_count_jump(points)
                    data["largest_jump"] = {"between": [lo, hi], "change": jump}
                _emit(args, _json_text(data))
            else:
                _emit(args, _csv_text(["theta", "extrema", "regime"], rows))
            return EXIT_OK
        times = _echo_times(args, spec.J) if (args.tmax or args.steps) else None
        series = evolve_echo(spec, all_up_state(spec.n_sites), times)

    logger.info(f"echo regime {series.regime.value} ({series.extrema} extrema, {series.method})")
    if args.format == "json":
        _emit(args, _json_text(series.to_dict()))
    else:
        _emit(args, _csv_text(["t", "re_e", "im_e", "abs_e", "norm"], series.rows()))
    return EXIT_OK


def cmd_rmt(args):
    """Real fraction and eccentricity of the pseudo-Hermitian ensemble over chi."""
    from spectra import eigendecompose, ensemble_sweep, rmt_sample

    if args.eigenvalues:
        sample = rmt_sample(args.n, args.chi[0], args.seed)
        spectrum = eigendecompose(sample.matrix, source_tag=f"rmt chi={args.chi[0]} seed={args.seed}")
        _write_file(args.eigenvalues, _csv_text(["re", "im"], _complex_rows(spectrum.eigenvalues)))

    points = ensemble_sweep(args.n, args.chi, args.samples, args.seed, workers=args.threads)
    if args.format == "json":
        _emit(args, _json_text([p.to_dict() for p in points]))
    else:
        rows = [(p.parameter, p.f_r, p.f_r_err, p.eccentricity, p.eccentricity_err, p.samples)
                for p in points]
        header = ["chi", "f_r", "f_r_err", "eccentricity", "eccentricity_err", "samples"]
        _emit(args, _csv_text(header, rows))
    return EXIT_OK


def _dense_report(tilde, superop):
    from config import load_settings
    from oracle import Check, VerificationReport, dense_superoperator

    tol = load_settings().tolerances.oracle_block
    report = VerificationReport("dense")
    diff = float(np.max(np.abs(dense_superoperator(tilde).matrix - superop.matrix), initial=0.0))
    report.add_check(Check("dense_match", diff < tol, diff, tol))
    return report


def cmd_oracle(args):
    """Compare the fragment decomposition against the full superoperator."""
    from oracle import build_superoperator, verify_conservation, verify_fragmentation

    tilde = _load_tilde(args)
    superop = build_superoperator(tilde)
    wanted = ["fragmentation", "conservation", "dense"] if args.check == "all" else [args.check]

    reports = []
    for kind in wanted:
        if kind == "fragmentation":
            reports.append(verify_fragmentation(tilde, superop))
        elif kind == "dense":
            reports.append(_dense_report(tilde, superop))
        else:
            try:
                reports.append(verify_conservation(tilde, superop))
            except DimensionError as e:
                if args.check != "all":
                    raise
                logger.warning(f"Skipping conservation check: {e}")

    passed = all(r.passed for r in reports)
    if args.format == "json":
        _emit(args, _json_text({"passed": passed, "reports": [r.to_dict() for r in reports]}))
    elif args.format == "csv":
        rows = [(r.kind, c.name, c.passed, c.value, c.threshold) for r in reports for c in r.checks]
        _emit(args, _csv_text(["kind", "check", "passed", "value", "threshold"], rows))
    else:
        from rich.console import Console
        from rich.table import Table

        console = Console()
        table = Table(title=f"oracle: {tilde.name or 'model'}, N={tilde.n_qubits}")
        table.add_column("kind")
        table.add_column("check")
        table.add_column("value", justify="right")
        table.add_column("threshold", justify="right")
        table.add_column("result")
        for r in reports:
            for c in r.checks:
                verdict = "[green]PASS[/green]" if c.passed else "[bold red]FAIL[/bold red]"
                table.add_row(r.kind, c.name, f"{c.value:.3e}", f"{c.threshold:.1e}", verdict)
        console.print(table)
        for r in reports:
            for message in r.errors:
                console.print(f"[red]{r.kind}: {message}[/red]", markup=True, highlight=False)
            for message in r.warnings:
                console.print(f"[yellow]{r.kind}: {message}[/yellow]", highlight=False)
    return EXIT_OK if passed else EXIT_FAILED


COMMANDS = {
    "validate": cmd_validate,
    "fragments": cmd_fragments,
    "graph": cmd_graph,
    "effective": cmd_effective,
    "tfim": cmd_tfim,
    "spectrum": cmd_spectrum,
    "stats": cmd_stats,
    "echo": cmd_echo,
    "rmt": cmd_rmt,
    "oracle": cmd_oracle,
}


if __name__ == "__main__":
    sys.exit(main())
