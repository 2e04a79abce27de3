"""Command-line entry point: ``abloop {gate,sweep,timing,blockade}``.

Parameters come from flags or from an INI-style config file (``--config``)
with one section per command, e.g.::

    [gate]
    J = 0.1
    UoverJ = 1e4
    phi = pi/2

Flags override the file. Exit codes: 0 ok, 1 internal error, 2 invalid
input, 3 blockade-regime warning under ``--strict``.
"""
from __future__ import annotations

import argparse
import ast
import configparser
import json
import math
import operator
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import blockade as bl
from . import constants as C
from . import protocols as pr
from . import timing as tm
from . import trap as tp
from .errors import DomainError

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_REGIME = 0, 1, 2, 3

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.USub: operator.neg, ast.UAdd: operator.pos}


class ConfigError(Exception):
    pass


def parse_angle(text: str) -> float:
    """Evaluate a small arithmetic expression that may contain ``pi``."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError(f"unsupported expression {text!r}")
    try:
        tree = ast.parse(str(text).strip(), mode="eval")
    except SyntaxError:
        raise ValueError(f"cannot parse angle {text!r}") from None
    return ev(tree)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ABLOOP_THREADS", "1")))
    except ValueError:
        return 1


class Params:
    """Flag values layered over one config-file section."""

    def __init__(self, args, section):
        self.args = args
        self.section = section

    def get(self, name, conv=float, default=None):
        val = getattr(self.args, name, None)
        if val is None and self.section is not None and name in self.section:
            val = self.section[name]
        if val is None:
            return default
        try:
            return conv(val)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid value for '{name}': {val!r} ({exc})") from None


def _bool(v):
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _emit(record: dict, fmt: str, out) -> None:
    if fmt == "json":
        def clean(v):
            if isinstance(v, float):
                return None if not math.isfinite(v) else float(tp.fmt(v))
            if isinstance(v, list):
                return [clean(x) for x in v]
            return v
        out.write(json.dumps({k: clean(v) for k, v in record.items()}, indent=2) + "\n")
        return
    for k, v in record.items():
        if isinstance(v, list):
            v = ",".join(tp.fmt(x) if isinstance(x, float) else str(x) for x in v)
        elif isinstance(v, (float, bool, int)):
            v = tp.fmt(v)
        out.write(f"{k}={v}\n")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


# ----------------------------------------------------------------- commands

def cmd_gate(p: Params, out) -> int:
    J = p.get("J", default=0.1)
    if not J > 0:
        raise ConfigError("J must be positive")
    U = p.get("U")
    if U is None:
        U = p.get("UoverJ", default=1e4) * J
    if U < 0:
        raise ConfigError("U must be non-negative")
    layout = pr.default_layout(p.get("side", default=100.0))
    phi = p.get("phi", parse_angle)
    B = p.get("B")
    if B is None:
        B = layout.field_for_ab_phase(phi) if phi is not None else 0.0
    protocol = p.get("protocol", str, "sequential")
    if protocol == "sequential":
        res = pr.sequential_loop_protocol(layout, J, U, B)
    elif protocol == "common":
        t_joint = p.get("t_joint", default=tm.joint_time(5, J))
        t23 = p.get("t23", default=0.0)
        if t_joint < 0 or t23 < 0:
            raise ConfigError("t_joint and t23 must be non-negative")
        res = pr.common_control_protocol(layout, J, t_joint, t23, B, U,
                                         target_phase=p.get("target_phase", parse_angle, 0.0))
    else:
        raise ConfigError(f"protocol must be 'sequential' or 'common', got {protocol!r}")
    record = {"protocol": protocol, "B_T": B, **res.record()}
    _emit(record, p.get("format", str, "kv"), out)
    if p.get("strict", _bool, False) and any(w.startswith("blockade") for w in res.warnings):
        return EXIT_REGIME
    return EXIT_OK


def _grid(p, name, lo, hi, num):
    single = p.get(name)
    if single is not None:
        return np.array([single])
    a, b = p.get(f"{name}_min", default=lo), p.get(f"{name}_max", default=hi)
    n = p.get(f"{name}_num", int, num)
    if n < 1 or not (a > 0 and b >= a):
        raise ConfigError(f"invalid {name} grid: min={a}, max={b}, num={n}")
    return np.linspace(a, b, n)


def cmd_sweep(p: Params, out) -> int:
    d = _grid(p, "d", 20.0, 120.0, 50)
    v0 = _grid(p, "V0", 1.0, 20.0, 50)
    hw_y = p.get("hw_y", default=2.0)
    hw_z = p.get("hw_z", default=10.0)
    mode = p.get("mode", str, "bare-coulomb")
    if mode not in tp.COULOMB_MODES:
        raise ConfigError(f"mode must be one of {tp.COULOMB_MODES}, got {mode!r}")
    mat = tp.MaterialParams(p.get("mass", default=C.GAAS_EFFECTIVE_MASS),
                            p.get("kappa", default=C.GAAS_KAPPA))
    template = tp.DeviceParams(mat, *[tp.TrapParams(1.0, 1.0, hw_y / C.HBAR, hw_z / C.HBAR)] * 2)
    with ThreadPoolExecutor(_threads()) as ex:
        chunks = list(ex.map(lambda di: tp.sweep(template, [di], v0, mode), d))
    rows = [r for chunk in chunks for r in chunk]
    tp.write_sweep_csv(rows, out)
    return EXIT_OK


def cmd_timing(p: Params, out) -> int:
    max_m = p.get("max_m", int, 10)
    if max_m < 1:
        raise ConfigError("max_m must be >= 1")
    J = p.get("J", default=0.1)
    if not J > 0:
        raise ConfigError("J must be positive")
    U = p.get("UoverJ", default=1e4) * J
    B = p.get("B", default=0.0)
    convention = p.get("convention", str, "as-printed")
    if convention not in tm.CONVENTIONS:
        raise ConfigError(f"convention must be one of {tm.CONVENTIONS}")
    sols = tm.integer_pair_search(max_m)
    if p.get("simulate", _bool, True):
        layout = pr.default_layout()
        with ThreadPoolExecutor(_threads()) as ex:
            list(ex.map(lambda s: tm.gate_error_from_mismatch(s, layout, J, U, B, convention), sols))
    tm.write_timing_csv(sols, convention, out)
    return EXIT_OK


def cmd_blockade(p: Params, out) -> int:
    J, U = p.get("J"), p.get("U")
    if J is None or U is None:
        raise ConfigError("blockade needs both J and U")
    if not (J > 0 and U > 0):
        raise ConfigError("J and U must be positive")
    pair = bl.BlockadePair(J, U)
    e_minus, e_plus = bl.exact_spectrum(pair)
    record = {
        "J": J, "U": U, "E_minus": e_minus, "E_plus": e_plus,
        "I": bl.effective_tunneling(pair), "exact_shift": bl.exact_shift(pair),
        "max_leakage": bl.max_leakage(pair), "truncation_error": bl.truncation_error(pair),
    }
    _emit(record, p.get("format", str, "kv"), out)
    return EXIT_OK


COMMANDS = {"gate": cmd_gate, "sweep": cmd_sweep, "timing": cmd_timing, "blockade": cmd_blockade}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="abloop", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, output=False):
        sp.add_argument("--config", help="INI file; the section named after the command is read")
        if output:
            sp.add_argument("--output", "-o", help="output path (default stdout)")

    g = sub.add_parser("gate", help="run a conditional-loop gate protocol")
    common(g, True)
    g.add_argument("--J", type=float, help="tunnel coupling J (meV)")
    g.add_argument("--U", type=float, help="blockade energy U (meV)")
    g.add_argument("--UoverJ", type=float, help="U/J ratio (ignored if --U given)")
    g.add_argument("--B", type=float, help="field (T)")
    g.add_argument("--phi", help="target AB phase, e.g. pi/2 (sets B from the loop area)")
    g.add_argument("--side", type=float, help="loop side length (nm)")
    g.add_argument("--protocol", choices=["sequential", "common"])
    g.add_argument("--t-joint", dest="t_joint", type=float, help="joint pulse time (ps)")
    g.add_argument("--t23", type=float, help="(2,3) pulse time (ps)")
    g.add_argument("--target-phase", dest="target_phase", help="cp angle for common control")
    g.add_argument("--format", choices=["kv", "json"])
    g.add_argument("--strict", action="store_const", const=True)

    s = sub.add_parser("sweep", help="(d, V0) sweep of device parameters as CSV")
    common(s, True)
    for name in ("d", "V0"):
        s.add_argument(f"--{name}", type=float, help=f"single {name} value")
        s.add_argument(f"--{name}-min", dest=f"{name}_min", type=float)
        s.add_argument(f"--{name}-max", dest=f"{name}_max", type=float)
        s.add_argument(f"--{name}-num", dest=f"{name}_num", type=int)
    s.add_argument("--hw-y", dest="hw_y", type=float, help="hbar*omega_y (meV)")
    s.add_argument("--hw-z", dest="hw_z", type=float, help="hbar*omega_z (meV)")
    s.add_argument("--mass", type=float, help="effective mass (m_e)")
    s.add_argument("--kappa", type=float, help="dielectric constant")
    s.add_argument("--mode", choices=list(tp.COULOMB_MODES))

    t = sub.add_parser("timing", help="integer timing search for common control")
    common(t, True)
    t.add_argument("--max-m", dest="max_m", type=int)
    t.add_argument("--J", type=float)
    t.add_argument("--UoverJ", type=float)
    t.add_argument("--B", type=float)
    t.add_argument("--convention", choices=list(tm.CONVENTIONS))
    t.add_argument("--no-simulate", dest="simulate", action="store_const", const=False)

    b = sub.add_parser("blockade", help="two-level blockade quantities")
    common(b, True)
    b.add_argument("--J", type=float)
    b.add_argument("--U", type=float)
    b.add_argument("--format", choices=["kv", "json"])
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        section = None
        if args.config:
            cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
            cp.optionxform = str
            try:
                with open(args.config) as f:
                    cp.read_file(f)
            except (OSError, configparser.Error) as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc}") from None
            section = cp[args.command] if cp.has_section(args.command) else {}
            section = {k.replace("-", "_"): v for k, v in section.items()}
        out, close = _open_out(getattr(args, "output", None))
        try:
            with warnings.catch_warnings():
                # regime problems are reported in the record itself
                warnings.simplefilter("ignore", RuntimeWarning)
                return COMMANDS[args.command](Params(args, section), out)
        finally:
            if close:
                out.close()
    except (ConfigError, DomainError) as exc:
        print(f"abloop {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"abloop {args.command}: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
