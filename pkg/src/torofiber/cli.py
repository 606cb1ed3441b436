"""Command line front end.

    torofiber <subcommand> <file> [--tau i,j,...] [--K n] [--S n] [--json] [--dot]

Exit status: 0 when every requested check passes, 1 when a mathematical check
fails (or a precondition is violated), 2 on input errors. Machine output
(``--json``) is a single canonical JSON document; the version header goes to
stderr so that stdout stays byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Callable, Optional

from . import __version__
from .errors import InputError, MathError
from .fiber_space import (
    ToricFiberSpace,
    chart_model,
    check_proper,
    kummer_base_change,
    reduction_degrees,
)
from .fixtures import default_tau
from .io import InputDocument, document_from_fiber_space, dump, parse
from .log_sheaves import (
    LogStalkModule,
    TruncatedSeriesChart,
    circle_cohomology,
    fiber_operator_is_composition,
    log_poincare_solve,
    monodromy_op,
    reduced_module_operator,
    relative_log_poincare_solve,
    relative_pushforward_check,
)
from .rob import blowup_chart_map, fiber_invariants
from .special_fiber import dual_complex, mv_cohomology, strata, strata_euler_characteristic
from .weight_ss import (
    degeneration_check_F,
    degeneration_check_W,
    e2_page,
    filtration_length_report,
    hodge_bound_table,
    weight_complex,
)

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2


class Outcome:
    """A report section plus whether its checks passed."""

    def __init__(self, data: dict, ok: bool = True, text: Optional[str] = None):
        self.data, self.ok, self.text = data, ok, text


def _plain(x: Any) -> Any:
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _tau(doc: InputDocument, fs: ToricFiberSpace, override) -> tuple[int, ...]:
    if override is not None:
        return override
    if doc.tau is not None:
        return doc.tau
    return default_tau(fs)


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(doc, fs, tau, opts) -> Outcome:
    flags = fs.flags()
    data = {"name": fs.name, "flags": flags}
    if flags["equidimensional"]:
        data["reduction_degrees"] = list(reduction_degrees(fs))
    return Outcome(data)


def cmd_reduce(doc, fs, tau, opts) -> Outcome:
    res = kummer_base_change(fs)
    new = document_from_fiber_space(res.space, doc.tau, doc.options)
    flags = res.space.flags()
    data = {
        "degrees": list(res.degrees),
        "source_index": res.source_index,
        "components": res.components,
        "flags": flags,
        "document": new.to_dict(),
    }
    return Outcome(data, flags["reduced"], text=dump(new))


def cmd_fiber(doc, fs, tau, opts) -> Outcome:
    st = strata(fs, tau)
    dc = dual_complex(st)
    data = {
        "tau": list(st.tau),
        "components": [list(c) for c in st.components],
        "strata": st.table(),
        "identifications": [[list(I) for I in g] for g in st.identifications()],
        "dual_complex": {"f_vector": dc.f_vector(), "connected_components": dc.components()},
    }
    if check_proper(fs):
        data["betti_special_fiber"] = mv_cohomology(st)
        data["euler_characteristic"] = strata_euler_characteristic(st)
    return Outcome(data, text=dc.dot(fs.name or "dual") if opts.dot else None)


def cmd_rob(doc, fs, tau, opts) -> Outcome:
    charts = []
    for sigma in fs.source.max_cones:
        ch = chart_model(fs, sigma)
        inv = fiber_invariants(ch)
        charts.append({
            "cone": list(sigma),
            "chart": {"n": ch.n, "m": ch.m, "n_prime": ch.n_prime, "m_prime": ch.m_prime,
                      "blocks": list(ch.blocks), "exponents": list(ch.exponents)},
            "fiber": {"interval": inv.a, "circle": inv.b, "disc": inv.c},
            "formulas": blowup_chart_map(ch).formulas(),
        })
    return Outcome({"charts": charts})


def _sample_series(nvars: int, K: int, S: int):
    """Deterministic test inputs inside the truncation window."""
    out = []
    for k in range(0, K):
        for l in range(0, min(S, 3)):
            key = ((k,) + (0,) * (nvars - 1), (l,) * nvars)
            out.append({key: Fraction(k + 1, l + 1)})
    return out


def cmd_logcheck(doc, fs, tau, opts) -> Outcome:
    K, S = opts.K, opts.S
    checks = {}
    circ = circle_cohomology(reduced_module_operator(K))
    s = circ.summary()
    checks["circle_H0_is_e1"] = [list(v) for v in (h.keys() for h in circ.h0_basis)] == [["e1"]]
    checks["circle_H1_vanishes"] = s["H1"] == []
    rep = relative_pushforward_check(K)
    for name, (_, _, ok) in rep.checks.items():
        checks[f"relative_{name}"] = bool(ok)
    checks["fiber_operator_is_composition"] = fiber_operator_is_composition(K)
    # monodromy on the stalk model of the chart boundary
    nb = max((len(c) for c in fs.source.max_cones), default=0)
    if nb:
        mod = LogStalkModule(nb, K)
        ops = [monodromy_op(mod, i).matrix for i in range(1, nb + 1)]
        checks["stalk_monodromies_commute"] = all(
            (a @ b).coeffs == (b @ a).coeffs for a in ops for b in ops
        )
    one = TruncatedSeriesChart(1, S, K)
    checks["log_poincare_roundtrip"] = all(
        not log_poincare_solve(one, h).residual for h in _sample_series(1, K, S)
    )
    two = TruncatedSeriesChart(2, S, K)
    checks["relative_log_poincare_roundtrip"] = all(
        not relative_log_poincare_solve(two, h, as_function=False).residual
        for h in _sample_series(2, K - 1, S)
    )
    data = {"K": K, "S": S, "circle": _plain(s), "checks": checks}
    return Outcome(data, all(checks.values()))


def cmd_weights(doc, fs, tau, opts) -> Outcome:
    wc = weight_complex(fs, tau)
    page = wc.page()
    wc.check_d1_squared()
    e2 = e2_page(page)
    rep = degeneration_check_W(fs, tau)
    data = {
        "tau": list(tau),
        "E1": _entries(page.dims()),
        "E2": _entries(e2.dims()),
        "E1_totals": page.totals(),
        "E2_totals": e2.totals(),
        "d1_squared_zero": True,
        "degeneration": {"totals": list(rep.totals), "oracle": rep.oracle and list(rep.oracle),
                         "status": rep.status},
        "filtration_length": filtration_length_report(fs, tau),
    }
    return Outcome(data, rep.status != "fail")


def _entries(dims: dict) -> list[dict]:
    return [{"p": -w, "q": m + w, "weight": w, "degree": m, "dim": d}
            for (w, m), d in sorted(dims.items(), key=lambda kv: (kv[0][1], -kv[0][0])) if d]


def cmd_hodge(doc, fs, tau, opts) -> Outcome:
    tab = hodge_bound_table(fs, tau)
    rep = degeneration_check_F(fs, tau)
    data = {"tau": list(tau), "U": [list(r) for r in tab.U], "E1_table": [list(r) for r in tab.raw],
            "totals": list(rep.totals), "E1_totals": tab.totals("raw"),
            "oracle": rep.oracle and list(rep.oracle), "status": rep.status}
    return Outcome(data, rep.status != "fail")


def cmd_report(doc, fs, tau, opts) -> Outcome:
    out, ok = {}, True
    for name, fn in SECTIONS:
        try:
            res = fn(doc, fs, tau, opts)
            out[name] = res.data
            ok = ok and res.ok
        except MathError as exc:
            out[name] = {"skipped": exc.code, "reason": str(exc)}
    return Outcome({"name": fs.name, "tau": list(tau), "sections": out}, ok)


SECTIONS: list[tuple[str, Callable]] = [
    ("validate", cmd_validate),
    ("reduce", cmd_reduce),
    ("fiber", cmd_fiber),
    ("rob", cmd_rob),
    ("logcheck", cmd_logcheck),
    ("weights", cmd_weights),
    ("hodge", cmd_hodge),
]
COMMANDS = dict(SECTIONS, report=cmd_report)


# ---------------------------------------------------------------------------
# rendering


def _markdown(name: str, data: dict) -> str:
    lines = [f"## {name}", "", "| key | value |", "|---|---|"]
    for k, v in data.items():
        lines.append(f"| {k} | {json.dumps(_plain(v), sort_keys=True)} |")
    return "\n".join(lines) + "\n"


def render_json(data: dict) -> str:
    return json.dumps(_plain(data), sort_keys=True, indent=2) + "\n"


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(sorted(int(x) for x in text.split(",") if x.strip()))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torofiber", description="Toroidal degeneration calculator.")
    p.add_argument("--version", action="version", version=f"torofiber {__version__}")
    p.add_argument("subcommand", choices=sorted(COMMANDS))
    p.add_argument("file", help="YAML input document ('-' for stdin)")
    p.add_argument("--tau", type=_int_list, default=None, help="base cone as target ray indices")
    p.add_argument("--K", type=int, default=None, help="log truncation degree")
    p.add_argument("--S", type=int, default=None, help="series truncation order")
    p.add_argument("--json", action="store_true", help="machine output")
    p.add_argument("--dot", action="store_true", help="fiber: print the dual complex as DOT")
    return p


def run(subcommand: str, doc: InputDocument, tau=None, K=None, S=None, as_json=True, dot=False) -> tuple[str, int]:
    """Run a subcommand on a parsed document; returns ``(output text, exit status)``."""
    fs = doc.fiber_space()
    tau = _tau(doc, fs, tau)
    if any(i >= len(fs.target.rays) for i in tau):
        raise InputError(f"tau {list(tau)} out of range")
    opts = argparse.Namespace(K=K or doc.options.K, S=S or doc.options.S, dot=dot)
    res = COMMANDS[subcommand](doc, fs, tau, opts)
    if subcommand == "fiber" and dot:
        return res.text, EXIT_OK if res.ok else EXIT_CHECK
    if as_json:
        text = render_json(res.data)
    elif subcommand == "reduce":
        text = res.text
    elif subcommand == "report":
        text = "".join(_markdown(k, v) for k, v in res.data["sections"].items())
    else:
        text = _markdown(subcommand, res.data)
    return text, EXIT_OK if res.ok else EXIT_CHECK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error[input]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"# torofiber {__version__}", file=sys.stderr)
    try:
        doc = parse(text)
        as_json = args.json or doc.options.format == "json"
        out, code = run(args.subcommand, doc, args.tau, args.K, args.S, as_json, args.dot)
    except InputError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, IndexError) as exc:
        print(f"error[input]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MathError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_CHECK
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
