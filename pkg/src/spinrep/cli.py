"""Command-line surface: generate gamma-matrix files, verify them, print the
classification table, and compute transport traces.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 I/O failure,
4 numerical integration failure.
"""

from __future__ import annotations

import json
import math
import sys

import click

from .clifford import Signature
from .errors import InputError, IntegrationError, SpinrepError
from .files import (
    dump_gamma_json,
    module_to_payload,
    payload_to_gamma,
    self_verify_module,
    trace_to_csv,
    verify_gamma,
)
from .modules import (
    assemble_signature,
    expected_irreducible_dim,
    intertwiners,
    octonion_module,
    sqrt_space_module,
)
from .surfaces import BUILTIN_SURFACES, ParametricSurface, spin_parallel_transport

EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

FAMILIES = ("recipe", "sqrt-space", "octonion")


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_sig(text: str) -> Signature:
    try:
        r_str, s_str = text.split(",")
        return Signature(int(r_str), int(s_str))
    except (ValueError, InputError) as exc:
        raise InputError(f"bad signature {text!r}: expected R,S") from exc


def _build_module(sig: Signature, family: str, variant: str):
    if family == "recipe":
        return assemble_signature(sig.r, sig.s, variant)
    if family == "sqrt-space":
        if sig.r != 0 or not 1 <= sig.s <= 4:
            raise InputError("sqrt-space family exists for signatures 0,n with n <= 4")
        if variant != "plus":
            raise InputError("sqrt-space family has no variant flag")
        return sqrt_space_module(sig.s)
    if family == "octonion":
        if sig.r != 0 or not 4 <= sig.s <= 8:
            raise InputError("octonion family exists for signatures 0,k with 4 <= k <= 8")
        if variant != "plus":
            raise InputError("octonion family has no variant flag")
        return octonion_module(sig.s)
    raise InputError(f"unknown family {family!r}")


@click.group()
def main() -> None:
    """Exact spinor representations of Clifford algebras and spin transport."""


@main.command()
@click.option("--sig", "sig_text", required=True, help="Signature as R,S (e.g. 0,8).")
@click.option("--family", type=click.Choice(FAMILIES), default="recipe", show_default=True)
@click.option("--variant", type=click.Choice(["plus", "minus"]), default="plus", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def generate(sig_text: str, family: str, variant: str, out_path: str) -> None:
    """Build a module, self-verify it, and write the gamma JSON file."""
    try:
        sig = _parse_sig(sig_text)
        module = _build_module(sig, family, variant)
    except InputError as exc:
        _fail(EXIT_INPUT, str(exc))
    checks = self_verify_module(module)
    bad = [(name, detail) for name, ok, detail in checks if not ok]
    if bad:
        for name, detail in bad:
            click.echo(f"FAIL {name}: {detail}", err=True)
        sys.exit(EXIT_VERIFY_FAILED)
    payload = module_to_payload(module)
    text = dump_gamma_json(payload)
    try:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {out_path}: {exc}")
    click.echo(
        f"wrote {out_path}: {module.signature} family={module.family} "
        f"variant={module.variant} K={module.field} real_dim={module.real_dim}"
    )


@main.command()
@click.argument("path", type=click.Path(exists=False))
def verify(path: str) -> None:
    """Re-verify a gamma JSON file; exit 0 only when every check passes."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read {path}: {exc}")
    try:
        payload = json.loads(raw)
        loaded = payload_to_gamma(payload)
    except (json.JSONDecodeError, InputError) as exc:
        _fail(EXIT_INPUT, f"malformed file: {exc}")
    checks = verify_gamma(loaded)
    failed = False
    for name, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail and not ok else ""
        click.echo(f"{status} {name}{suffix}")
        failed |= not ok
    sys.exit(EXIT_VERIFY_FAILED if failed else 0)


_K_TAGS = ["C", "H", "H", "H", "C", "R", "R", "R"]
_K_DIMS = [2, 4, 4, 4, 2, 1, 1, 1]
_K0_TAGS = ["M2(R)", "M2(C)", "H", "H", "H", "C", "R", "R"]
_K0_DIMS = [4, 8, 4, 4, 4, 2, 1, 1]


@main.command()
@click.option("--max-n", default=8, show_default=True, help="Largest Euclidean dimension (<= 16).")
def classify(max_n: int) -> None:
    """Compute dims and intertwiner algebras for Cl(0,n) against the tables."""
    if not 1 <= max_n <= 16:
        _fail(EXIT_INPUT, "--max-n must be between 1 and 16")
    header = f"{'n':>3} {'variant':>8} {'dim':>5} {'K':>6} {'K0':>6} {'expected':>16} match"
    click.echo(header)
    all_match = True
    for n in range(1, max_n + 1):
        variants = ["plus", "minus"] if n % 4 == 3 else ["plus"]
        for variant in variants:
            module = assemble_signature(0, n, variant)
            full = intertwiners(module)
            even = intertwiners(module, even_only=True)
            idx = (n - 1) % 8
            exp_dim = expected_irreducible_dim(0, n)
            ok = (
                module.real_dim == exp_dim
                and full.real_dimension == _K_DIMS[idx]
                and full.division_algebra == _K_TAGS[idx]
                and even.real_dimension == _K0_DIMS[idx]
                and even.division_algebra == _K0_TAGS[idx]
            )
            all_match &= ok
            expected = f"{exp_dim},{_K_TAGS[idx]},{_K0_TAGS[idx]}"
            click.echo(
                f"{n:>3} {variant:>8} {module.real_dim:>5} "
                f"{full.division_algebra:>6} {even.division_algebra:>6} "
                f"{expected:>16} {'MATCH' if ok else 'MISMATCH'}"
            )
    sys.exit(0 if all_match else EXIT_VERIFY_FAILED)


def _parse_curve(spec: str):
    if spec == "great-circle":
        return lambda t: (2 * math.pi * t, 0.0)
    names = {
        "sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp,
        "sqrt": math.sqrt, "pi": math.pi, "atan": math.atan, "abs": abs,
    }
    try:
        parts = dict(
            piece.split("=", 1) for piece in (p.strip() for p in spec.split(";")) if piece
        )
        u_expr = compile(parts["u"], "<curve-u>", "eval")
        v_expr = compile(parts["v"], "<curve-v>", "eval")
    except (ValueError, KeyError, SyntaxError) as exc:
        raise InputError(f"bad curve spec {spec!r}: expected 'u=EXPR; v=EXPR'") from exc

    def curve(t: float):
        env = dict(names, t=t)
        return (
            float(eval(u_expr, {"__builtins__": {}}, env)),
            float(eval(v_expr, {"__builtins__": {}}, env)),
        )

    return curve


def _parse_surface(spec: str) -> ParametricSurface:
    if spec in BUILTIN_SURFACES:
        return BUILTIN_SURFACES[spec]()
    names = {
        "sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp,
        "sqrt": math.sqrt, "pi": math.pi, "atan": math.atan, "abs": abs,
    }
    try:
        parts = dict(
            piece.split("=", 1) for piece in (p.strip() for p in spec.split(";")) if piece
        )
        exprs = {axis: compile(parts[axis], f"<surface-{axis}>", "eval") for axis in "xyz"}
    except (ValueError, KeyError, SyntaxError) as exc:
        raise InputError(
            f"bad surface spec {spec!r}: builtin name or 'x=EXPR; y=EXPR; z=EXPR'"
        ) from exc

    def chart(u: float, v: float):
        env = dict(names, u=u, v=v)
        return tuple(
            float(eval(exprs[axis], {"__builtins__": {}}, env)) for axis in "xyz"
        )

    return ParametricSurface(chart, name="custom")


_Q0_SHORTHAND = {
    "1": (1.0, 0.0, 0.0, 0.0),
    "i": (0.0, 1.0, 0.0, 0.0),
    "j": (0.0, 0.0, 1.0, 0.0),
    "k": (0.0, 0.0, 0.0, 1.0),
}


def _parse_q0(text: str):
    if text in _Q0_SHORTHAND:
        return _Q0_SHORTHAND[text]
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad spinor {text!r}") from exc
    if len(parts) != 4:
        raise InputError("spinor must be w,x,y,z or one of 1,i,j,k")
    return tuple(parts)


@main.command()
@click.option("--surface", "surface_spec", default="unit-sphere", show_default=True,
              help="Builtin (unit-sphere, plane) or 'x=..; y=..; z=..' in u,v.")
@click.option("--curve", "curve_spec", default="great-circle", show_default=True,
              help="Builtin great-circle or 'u=..; v=..' in t.")
@click.option("--q0", "q0_text", default="i", show_default=True,
              help="Initial spinor: w,x,y,z or one of 1,i,j,k.")
@click.option("--steps", default=10000, show_default=True)
@click.option("--sign", type=click.Choice(["+1", "-1"]), default="+1", show_default=True)
@click.option("--t0", default=0.0, show_default=True)
@click.option("--t1", default=1.0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def transport(surface_spec, curve_spec, q0_text, steps, sign, t0, t1, out_path) -> None:
    """Spin-parallel-transport a spinor along a surface curve; write CSV."""
    try:
        surface = _parse_surface(surface_spec)
        curve = _parse_curve(curve_spec)
        q0 = _parse_q0(q0_text)
        if steps < 2:
            raise InputError("steps must be at least 2")
        initial_sign = 1 if sign == "+1" else -1
    except InputError as exc:
        _fail(EXIT_INPUT, str(exc))
    try:
        trace = spin_parallel_transport(
            surface, curve, q0, initial_sign=initial_sign, steps=steps,
            t0=t0, t1=t1, strict=False,
        )
    except IntegrationError as exc:
        _fail(EXIT_NUMERIC, f"integration failed at t={exc.t}: {exc}")
    except InputError as exc:
        _fail(EXIT_INPUT, str(exc))
    except SpinrepError as exc:
        _fail(EXIT_NUMERIC, str(exc))
    text = trace_to_csv(trace)
    try:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {out_path}: {exc}")
    breaches = sum(1 for flag in trace.ok if not flag)
    suffix = f" ({breaches} rows breach tolerance)" if breaches else ""
    click.echo(f"wrote {out_path}: {len(trace)} samples{suffix}")


if __name__ == "__main__":
    main()
