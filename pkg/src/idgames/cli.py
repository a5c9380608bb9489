"""Command-line front end.

Results go to ``--out`` (or stdout) in a machine-readable format; progress and
human-readable summaries go to stderr through :mod:`logging`.  Failures print
one line ``error[<code>]: <message>`` to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import games
from .census import fraction_doc, run_census
from .classical import optimal_classical
from .counting import bound_curve, curve_csv, empirical_gap_sample
from .game import GameFunction, Scenario, game_from_document, parse_table
from .nosignaling import optimal_ns
from .quantum import seesaw
from .symmetry import classes_to_document, enumerate_classes

log = logging.getLogger("idgames")

THREADS_ENV = "IDGAMES_THREADS"

EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_LIMIT = 4
EXIT_CHECK = 1


class CliError(Exception):
    def __init__(self, code: str, message: str, status: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code
        self.status = status


@dataclass
class RunConfig:
    command: str
    scenario: str | None = None
    game: str | None = None
    dims: str | None = None
    seed: int = 0
    restarts: int | None = None
    tol: float = 1e-10
    threads: int = 1
    out: str | None = None
    format: str = "json"


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise CliError("bad-threads", f"{THREADS_ENV}={env!r} is not an integer", EXIT_USAGE)
        if n < 1:
            raise CliError("bad-threads", f"{THREADS_ENV} must be positive", EXIT_USAGE)
        return n
    return os.cpu_count() or 1


# -- input helpers --------------------------------------------------------------

def load_game(spec: str) -> tuple[str, GameFunction]:
    """A bundled game name, a JSON game document or a two-player text table."""
    if spec in games.NAMES:
        return spec, games.load_bundled(spec)
    path = Path(spec)
    if not path.exists():
        raise CliError("game-not-found",
                       f"{spec!r} is neither a file nor a bundled game ({', '.join(games.NAMES)})")
    text = path.read_text()
    try:
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
            return doc.get("name", path.stem), game_from_document(doc)
        return path.stem, parse_table(text)
    except (ValueError, IndexError) as e:
        raise CliError("bad-game", f"{spec}: {e}") from None


def parse_scenario(text: str | None) -> Scenario:
    if not text:
        raise CliError("missing-scenario", "--scenario n,m_i,m_o is required", EXIT_USAGE)
    try:
        return Scenario.parse(text)
    except ValueError as e:
        raise CliError("bad-scenario", str(e), EXIT_USAGE) from None


def parse_dims(text: str | None, n: int) -> tuple[int, ...]:
    if not text:
        return (2,) * n
    try:
        dims = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise CliError("bad-dims", f"--dims must be comma-separated integers, got {text!r}",
                       EXIT_USAGE) from None
    if len(dims) != n or min(dims) < 1:
        raise CliError("bad-dims", f"--dims needs {n} positive entries", EXIT_USAGE)
    return dims


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CliError("bad-number", f"cannot read {text!r} as a number", EXIT_USAGE) from None


# -- output helpers -------------------------------------------------------------

def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def emit(cfg: RunConfig, text: str):
    if cfg.out:
        Path(cfg.out).write_text(text)
        log.info("wrote %s", cfg.out)
    else:
        sys.stdout.write(text)


def _need_format(cfg: RunConfig, allowed):
    if cfg.format not in allowed:
        raise CliError("bad-format", f"{cfg.command} supports --format {', '.join(allowed)}",
                       EXIT_USAGE)


# -- commands -----------------------------------------------------------------

def cmd_enumerate(cfg: RunConfig, args) -> int:
    s = parse_scenario(cfg.scenario)
    try:
        classes = enumerate_classes(s)
    except ValueError as e:
        raise CliError("too-large", str(e), EXIT_LIMIT) from None
    log.info("%s: %d classes", s, len(classes))
    if cfg.format == "csv":
        emit(cfg, _rows_csv(["code", "orbit_size"], [(c.code, c.orbit_size) for c in classes]))
    elif cfg.format == "text":
        emit(cfg, "".join(f"{c.code} {c.orbit_size}\n" for c in classes))
    else:
        emit(cfg, _json(classes_to_document(s, classes)))
    return 0


def cmd_bounds(cfg: RunConfig, args) -> int:
    if not cfg.game:
        raise CliError("missing-game", "--game is required", EXIT_USAGE)
    name, f = load_game(cfg.game)
    s = f.scenario
    cl = optimal_classical(f)
    ns = optimal_ns(f)
    doc = {
        "game": name,
        "scenario": str(s),
        "omega_cl": fraction_doc(cl.value),
        "classical_witness": [list(a) for a in cl.witness.maps],
        "omega_ns": fraction_doc(ns.value),
        "ns_certified": ns.certified,
    }
    if s.outputs == 2:
        dims = parse_dims(cfg.dims, s.n_players)
        q = seesaw(f, dims, restarts=cfg.restarts or 10, seed=cfg.seed, tol=cfg.tol)
        doc.update({"omega_q_lower": q.value, "dims": list(dims),
                    "restarts": cfg.restarts or 10, "seed": cfg.seed})
    log.info("%s: cl=%s ns=%s q>=%s", name, cl.value, ns.value, doc.get("omega_q_lower"))
    if cfg.format == "csv":
        rows = [("omega_cl", str(cl.value), f"{float(cl.value):.9g}"),
                ("omega_ns", str(ns.value), f"{float(ns.value):.9g}")]
        if "omega_q_lower" in doc:
            rows.append(("omega_q_lower", "", repr(doc["omega_q_lower"])))
        emit(cfg, _rows_csv(["bound", "fraction", "value"], rows))
    elif cfg.format == "text":
        lines = [f"omega_cl {cl.value}", f"omega_ns {ns.value}"]
        if "omega_q_lower" in doc:
            lines.append(f"omega_q_lower {doc['omega_q_lower']!r}")
        emit(cfg, "\n".join(lines) + "\n")
    else:
        emit(cfg, _json(doc))
    return 0


def cmd_census(cfg: RunConfig, args) -> int:
    s = parse_scenario(cfg.scenario)
    try:
        rep = run_census(s, workers=cfg.threads)
    except ValueError as e:
        raise CliError("too-large", str(e), EXIT_LIMIT) from None
    log.info("%s: %d classes, %d nontrivial", s, rep.class_count, rep.nontrivial_class_count)
    if cfg.format == "csv":
        emit(cfg, rep.to_csv())
    elif cfg.format == "text":
        emit(cfg, rep.to_text())
    else:
        emit(cfg, rep.dumps())
    return 0


def cmd_quantum(cfg: RunConfig, args) -> int:
    _need_format(cfg, ("json",))
    if not cfg.game:
        raise CliError("missing-game", "--game is required", EXIT_USAGE)
    name, f = load_game(cfg.game)
    if f.scenario.outputs != 2:
        raise CliError("non-binary", "seesaw supports binary outputs only")
    dims = parse_dims(cfg.dims, f.scenario.n_players)
    restarts = cfg.restarts or 10
    res = seesaw(f, dims, restarts=restarts, seed=cfg.seed, tol=cfg.tol, real=args.real)
    log.info("%s dims=%s: %.10f (restart %d, %d iterations)", name, dims, res.value,
             res.restart, res.iterations)
    emit(cfg, _json({
        "game": name,
        "dims": list(dims),
        "restarts": restarts,
        "seed": cfg.seed,
        "value": res.value,
        "converged": res.converged,
        "best_restart": res.restart,
        "iterations": res.iterations,
        "strategy": res.strategy.to_document(),
    }))
    return 0


def cmd_counting(cfg: RunConfig, args) -> int:
    omega = parse_fraction(args.omega)
    if not 0 <= omega <= 1:
        raise CliError("bad-number", "--omega must lie in [0, 1]", EXIT_USAGE)
    if args.players < 1 or args.m_max < 1:
        raise CliError("bad-number", "--players and --m-max must be positive", EXIT_USAGE)
    curve = bound_curve(args.players, float(omega), range(1, args.m_max + 1))
    doc = {
        "players": args.players,
        "omega": fraction_doc(omega),
        "hstar": curve[0].hstar,
        "curve": [{"m": b.m, "log_fraction_bound": b.log_fraction_bound} for b in curve],
    }
    if args.sample_m:
        g = empirical_gap_sample(args.players, args.sample_m, args.samples, cfg.seed,
                                 parse_fraction(args.epsilon))
        doc["sample"] = {
            "m": g.m,
            "samples": g.samples,
            "seed": cfg.seed,
            "epsilon": fraction_doc(g.epsilon),
            "near_floor_fraction": fraction_doc(g.near_floor_fraction),
            "mean_omega_cl": fraction_doc(g.mean),
            "ns_floor": fraction_doc(g.ns_floor),
            "distribution": [{"omega_cl": fraction_doc(k), "count": v}
                             for k, v in g.distribution.items()],
        }
    if cfg.format == "csv":
        emit(cfg, curve_csv(curve))
    elif cfg.format == "text":
        emit(cfg, "".join(f"{b.m} {b.log_fraction_bound:.6f}\n" for b in curve))
    else:
        emit(cfg, _json(doc))
    return 0


def cmd_verify_paper(cfg: RunConfig, args) -> int:
    from .acceptance import Options, format_result, run_all

    only = {int(t) for t in args.only.split(",")} if args.only else None
    results = run_all(Options(seed=cfg.seed, restarts=cfg.restarts, workers=cfg.threads),
                      only=only, echo=lambda line: log.warning("%s", line))
    doc = [
        {
            "criterion": r.number,
            "title": r.title,
            "passed": r.passed,
            "stochastic": r.stochastic,
            "items": [
                {"label": i.label, "expected": str(i.expected), "actual": str(i.actual),
                 "tolerance": i.tolerance, "passed": i.passed}
                # runtimes differ between runs, keep them out of the document
                for i in r.items if not i.label.endswith("runtime")
            ],
        }
        for r in results
    ]
    if cfg.format == "text":
        emit(cfg, "\n".join(format_result(r) for r in results) + "\n")
    else:
        emit(cfg, _json(doc))
    return 0 if all(r.passed for r in results) else EXIT_CHECK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "bounds": cmd_bounds,
    "census": cmd_census,
    "quantum": cmd_quantum,
    "counting": cmd_counting,
    "verify-paper": cmd_verify_paper,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="scenario as n,m_i,m_o")
    common.add_argument("--game", help="bundled game name, JSON game file or text table")
    common.add_argument("--dims", help="local dimensions, e.g. 2,2")
    common.add_argument("--restarts", type=int, help="seesaw restarts")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-10, help="seesaw improvement tolerance")
    common.add_argument("--threads", type=int,
                        help=f"worker processes (default: ${THREADS_ENV} or CPU count)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="idgames", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("enumerate", parents=[common], help="list relabelling classes")
    sub.add_parser("bounds", parents=[common], help="classical, no-signaling, quantum bounds")
    sub.add_parser("census", parents=[common], help="class statistics for a scenario")
    q = sub.add_parser("quantum", parents=[common], help="seesaw lower bound")
    q.add_argument("--real", action="store_true", help="restrict to real matrices")
    c = sub.add_parser("counting", parents=[common], help="encoding bound and random sample")
    c.add_argument("--players", type=int, default=2)
    c.add_argument("--omega", default="3/8")
    c.add_argument("--m-max", type=int, default=64)
    c.add_argument("--sample-m", type=int, help="inputs per player for a random sample")
    c.add_argument("--samples", type=int, default=1000)
    c.add_argument("--epsilon", default="1/16")
    v = sub.add_parser("verify-paper", parents=[common], help="run the reproduction checks")
    v.add_argument("--only", help="comma-separated criterion numbers")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        threads = args.threads if args.threads is not None else default_threads()
        if threads < 1:
            raise CliError("bad-threads", "--threads must be positive", EXIT_USAGE)
        if args.restarts is not None and args.restarts < 1:
            raise CliError("bad-restarts", "--restarts must be positive", EXIT_USAGE)
        cfg = RunConfig(args.command, args.scenario, args.game, args.dims, args.seed,
                        args.restarts, args.tol, threads, args.out, args.format)
        return COMMANDS[args.command](cfg, args)
    except CliError as e:
        print(f"error[{e.code}]: {e}", file=sys.stderr)
        return e.status
    except (ValueError, IndexError) as e:
        print(f"error[invalid]: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error[io]: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
