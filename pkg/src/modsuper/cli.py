"""Command-line front end: modsuper {algebra,grading,kw,osp12,morita}.

Exit codes: 0 all checks pass, 1 usage or configuration error, 2 a
theorem-level check failed, 3 a randomized test was inconclusive.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import itertools
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .exactlin import FieldCtx, frobenius_root
from .grading import FieldTooSmallError, build_m, centralizer_dims_by_partition, grading_for, verify_grading
from .pbw import (DimensionBoundError, UAlgebraCtx, baby_verma, borel_data, eta_character,
                  lambda_set, reduced_dim)
from .reduction import ReductionError, enumerate_phi_u, jordan_decomp_chi, morita_desk_check
from .repkit import (UnknownError, cartan_data, composition_factors, find_isomorphism,
                     freeness_check, is_semisimple, kw_audit, pim_table)
from .superlie import (AlgebraError, PChar, centralizer, check_axioms, check_restricted,
                       chi_from_element, construct, element_from_chi, root_decomposition)

EXIT_OK, EXIT_USAGE, EXIT_THEOREM, EXIT_UNKNOWN = 0, 1, 2, 3
SCHEMA_VERSION = 1
KEYS = ("p", "k", "family", "dims", "chi", "seed", "dim_bound", "cache", "format")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int = 3
    k: int = 1
    family: str = "osp12"
    dims: tuple | None = None
    chi: str = "zero"
    seed: int = 0
    dim_bound: int = 600
    cache: str | None = None
    format: str = "json"

    def validate(self):
        if self.p < 3 or any(self.p % q == 0 for q in range(2, int(self.p ** 0.5) + 1)):
            raise UsageError(f"p must be an odd prime, got {self.p}")
        if self.k < 1:
            raise UsageError("k must be at least 1")
        if self.format not in ("json", "csv"):
            raise UsageError("format must be json or csv")
        head = self.chi.split(":", 1)[0]
        if head not in ("zero", "nilregular", "ssregular", "explicit", "partitions"):
            raise UsageError(f"unknown chi spec {self.chi!r}")
        return self

    def field(self) -> FieldCtx:
        return FieldCtx(self.p, self.k)

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "family": self.family,
                "dims": list(self.dims) if self.dims else None, "chi": self.chi,
                "seed": self.seed, "dimBound": self.dim_bound}


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def read_config(path: str) -> dict:
    """Flat key = value file; a section header is optional."""
    with open(path) as fh:
        text = fh.read()
    if not text.lstrip().startswith("["):
        text = "[run]\n" + text
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise UsageError(f"bad config file: {exc}") from exc
    out = {}
    for sec in cp.sections():
        for key, val in cp.items(sec):
            key = key.replace("-", "_")
            if key not in KEYS:
                raise UsageError(f"unknown config key {key!r}")
            out[key] = val
    return out


def _coerce(key, val):
    if val is None:
        return None
    if key in ("p", "k", "seed", "dim_bound"):
        return int(val)
    if key == "dims":
        if isinstance(val, str):
            val = val.replace(",", " ").split()
        if len(val) not in (1, 2):
            raise ValueError("dims takes one or two integers")
        return tuple(int(x) for x in val)
    return val


def make_config(args) -> RunConfig:
    vals = {}
    if getattr(args, "config", None):
        vals.update(read_config(args.config))
    for key in KEYS:
        v = getattr(args, key, None)
        if v is not None:
            vals[key] = v
    if os.environ.get("MODSUPER_CACHE"):
        vals["cache"] = os.environ["MODSUPER_CACHE"]
    try:
        cfg = RunConfig(**{k: _coerce(k, v) for k, v in vals.items()})
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    return cfg.validate()


# ---------------------------------------------------------------------------
# algebra and character resolution
# ---------------------------------------------------------------------------

def build_algebra(cfg: RunConfig, ctx=None):
    ctx = ctx or cfg.field()
    try:
        return construct(cfg.family, cfg.dims, ctx=ctx)
    except (AlgebraError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _artin_schreier_values(ctx):
    """Nonzero c with lambda^p - lambda = c^p solvable in the field."""
    vals = []
    for t in ctx.elements():
        c = frobenius_root(ctx, ctx.sub(ctx.pow(t, ctx.p), t))
        if c and c not in vals:
            vals.append(c)
    return vals


def _regular_nilpotent(g):
    """Sum of the root vectors of the simple roots of the even part (lies in n+)."""
    rs = root_decomposition(g)
    f = np.array([1000 ** (len(rs.roots[0]) - 1 - t) for t in range(len(rs.roots[0]))])
    even_pos = [a for a in rs.roots if rs.parity[a] == 0 and np.dot(f, a) > 0]
    simple = [a for a in even_pos
              if not any(tuple(x + y for x, y in zip(b, c)) == a for b in even_pos for c in even_pos)]
    x = g.ctx.zeros(g.n)
    for a in simple:
        x[0, rs.spaces[a][0]] = 1
    return x


def _partition_element(g, spec):
    if g.family not in ("gl", "sl"):
        raise UsageError("partitions: is supported for gl and sl")
    try:
        parts = [[int(t) for t in s.split(",") if t] for s in spec.split(";")]
    except ValueError as exc:
        raise UsageError(f"bad partition spec {spec!r}") from exc
    if len(parts) != 2 or sum(parts[0]) != g.dims[0] or sum(parts[1]) != g.dims[1]:
        raise UsageError("partitions:l;m must partition m and n")
    m = g.dims[0]
    X = np.zeros((g.vdim, g.vdim), dtype=np.int64)
    for off, lam in ((0, parts[0]), (m, parts[1])):
        pos = off
        for size in lam:
            for i in range(size - 1):
                X[pos + i, pos + i + 1] = 1
            pos += size
    from .exactlin import Matrix
    return g.coords(Matrix.from_codes(g.ctx, X)), parts


def resolve_chi(g, spec: str):
    ctx = g.ctx
    head, _, rest = spec.partition(":")
    if head == "zero":
        return PChar.zero(g)
    if head == "explicit":
        vals = {}
        for item in filter(None, rest.split(",")):
            lab, _, v = item.partition("=")
            if lab not in g.labels:
                raise UsageError(f"unknown basis label {lab!r}")
            vals[lab] = int(v) % ctx.q
        return PChar.from_dict(g, vals)
    if head == "partitions":
        x, _ = _partition_element(g, rest)
        return chi_from_element(g, x)
    if head == "nilregular":
        if g.family == "sl11":
            return PChar.from_dict(g, {"Y": 0})
        return chi_from_element(g, _regular_nilpotent(g))
    # ssregular
    vals = _artin_schreier_values(ctx)
    if not vals:
        raise UsageError("ssregular needs an extension field: use --k 2")
    if g.family == "sl11":
        return PChar.from_dict(g, {"h": vals[0]})
    rs = root_decomposition(g)
    cart = sorted(rs.cartan)
    for combo in itertools.product(vals + [0], repeat=len(cart)):
        chi = PChar(g, ctx.zeros(g.n))
        for h, c in zip(cart, combo):
            chi.values[:, h] = ctx.coeffs(c)
        try:
            s = element_from_chi(g, chi)
        except AlgebraError:
            continue
        if all(g.bracket(s, g.basis_vector(rs.spaces[a][0])).any() for a in rs.roots):
            return chi
    raise UsageError("no regular semisimple character with solvable weights; increase --k")


def _is_nilpotent_chi(g, chi) -> bool:
    if g.family == "sl11":
        return not chi.on("h")
    x = element_from_chi(g, chi)
    M = g.to_matrix(x)
    return M.power(g.vdim).is_zero()


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _flatten(obj, prefix=""):
    # empty containers are leaves so the CSV round-trips to the same JSON
    if isinstance(obj, (dict, list)) and not obj:
        yield prefix, obj
    elif isinstance(obj, dict):
        for k in obj:
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["path", "value"])
    for path, val in _flatten(report):
        w.writerow([path, json.dumps(val)])
    return buf.getvalue()


def _envelope(command, cfg, body, ok):
    return {"schema": SCHEMA_VERSION, "version": __version__, "command": command,
            "config": cfg.to_json(), "ok": ok, **body}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_algebra(cfg: RunConfig):
    g = build_algebra(cfg)
    axioms = check_axioms(g)
    rep = check_restricted(g, seed=cfg.seed)
    d0, d1 = g.sdim
    body = {
        "field": g.ctx.header(),
        "dims": [d0, d1],
        "labels": g.labels,
        "parity": g.parity.tolist(),
        "axioms": axioms,
        "restricted": {"ok": rep.ok, "axiom": rep.axiom, "checked": rep.checked},
        "formNondegenerate": bool(g.form_nondegenerate()),
        "dimU": reduced_dim(g),
    }
    try:
        body["roots"] = root_decomposition(g).to_json()
    except AlgebraError:
        body["roots"] = None
    ok = not axioms and rep.ok
    return _envelope("algebra", cfg, body, ok), ok


def _grading_data(g, chi, seed):
    X = element_from_chi(g, chi)
    Z = grading_for(g, X)
    gr = verify_grading(g, X, Z)
    mp = build_m(g, Z, chi, seed)
    return X, Z, gr, mp


def cmd_grading(cfg: RunConfig):
    g = build_algebra(cfg)
    chi = resolve_chi(g, cfg.chi)
    if not _is_nilpotent_chi(g, chi):
        raise UsageError("grading needs a nilpotent character")
    X, Z, gr, mp = _grading_data(g, chi, cfg.seed)
    cz, kw = centralizer(g, chi)
    routes = {"kernel": [len(cz[0]), len(cz[1])], "grading": list(gr.centralizer_dim)}
    if cfg.chi.startswith("partitions:") and g.family == "gl":
        _, parts = _partition_element(g, cfg.chi.split(":", 1)[1])
        routes["partition"] = list(centralizer_dims_by_partition(parts[0], parts[1]))
    agree = len({tuple(v) for v in routes.values()}) == 1
    body = {
        "grading": gr.to_json(),
        "centralizer": routes,
        "routesAgree": agree,
        "m": {"sdim": list(mp.sdim("m")), "reducedDim": mp.reduced_dim("m")},
        "mPrime": {"sdim": list(mp.sdim("m'")), "reducedDim": mp.reduced_dim("m'")},
        "rOdd": mp.r_odd,
        "kwDivisor": kw.divisor,
    }
    ok = gr.ok and agree
    return _envelope("grading", cfg, body, ok), ok


def _uctx(g, chi, cfg):
    return UAlgebraCtx(g, chi, cache_dir=cfg.cache)


def cmd_kw(cfg: RunConfig):
    g = build_algebra(cfg)
    chi = resolve_chi(g, cfg.chi)
    u = _uctx(g, chi, cfg)
    borel = borel_data(g)
    for b in borel[1]:
        if g.parity[b] == 0 and chi.on(b):
            raise UsageError("chi must vanish on the even positive part for baby Vermas")
    nil = _is_nilpotent_chi(g, chi)
    m_data = None
    if nil and g.form_nondegenerate():
        X, Z, _, mp = _grading_data(g, chi, cfg.seed)
        m_data = (mp.m_basis, eta_character(g, mp.m_basis, chi, Z.degree_of))
    classes, rows = [], []
    weights = lambda_set(u, borel[0]).solutions
    if not weights:
        raise FieldTooSmallError(f"Lambda_chi is empty over F_{g.ctx.q}; use a larger --k")
    for lam in weights:
        Zl = baby_verma(u, borel, lam)
        if Zl.dim > cfg.dim_bound * 4:
            raise DimensionBoundError(f"baby Verma of dim {Zl.dim} exceeds the bound")
        cs = composition_factors(Zl, cfg.seed, known=classes)
        classes = cs.classes
        rows.append({"lambda": [int(x) for x in lam], "dim": Zl.dim,
                     "factors": [[t, m] for t, m in enumerate(cs.multiplicity) if m]})
    audit = kw_audit(g, chi, [c.module for c in classes])
    simples = []
    free_ok = True
    for t, c in enumerate(classes):
        entry = {"index": t, "dim": c.dim, "type": c.type,
                 "sdim": [int((c.module.parity == 0).sum()), int((c.module.parity == 1).sum())]}
        if m_data is not None:
            fr = freeness_check(c.module, *m_data)
            entry["freeness"] = {"dimUm": fr.dim_u_m, "dimInvariants": fr.dim_invariants, "ok": fr.ok}
            free_ok &= fr.ok
        simples.append(entry)
    body = {"kwDivisor": audit.divisor, "violations": audit.violations,
            "simples": simples, "babyVermas": rows, "nilpotent": nil}
    ok = audit.ok and free_ok
    u.save_cache()
    return _envelope("kw", cfg, body, ok), ok


def osp12_expected(p: int, case: str) -> dict:
    h = (p - 1) // 2
    if case == "ssregular":
        return {"count": p, "dims": [2 * p] * p, "types": ["M"] * p, "pim": [2 * p] * p,
                "semisimple": True}
    if case == "nilregular":
        return {"count": h + 1, "dims": [2 * p] * (h + 1), "types": ["M"] * h + ["Q"],
                "pim": [4 * p] * (h + 1), "semisimple": False,
                "regular": [4 * p] * h + [2 * p], "endP": [[2, 0]] * h + [[2, 2]]}
    return {"count": p, "dims": [2 * l + 1 for l in range(p)], "types": ["M"] * p,
            "pim": [4 * p] * p, "semisimple": False}


def osp12_case(p: int, case: str, seed: int = 0, cache=None, pims=True, bound=600) -> dict:
    """Numerical table for one character of osp(1|2)."""
    k = 2 if case == "ssregular" else 1
    ctx = FieldCtx(p, k)
    g = construct("osp12", ctx=ctx)
    chi = resolve_chi(g, case if case != "zero" else "zero")
    u = UAlgebraCtx(g, chi, cache_dir=cache)
    cd = cartan_data(u, seed, regular=(case != "zero" or p <= 5), bound=bound)
    classes = cd.classes
    keys = sorted(cd.verma_table)

    # classes are labelled by the least weight of a simple baby Verma, or by dim when restricted
    def label(t):
        c = classes[t]
        if case == "zero":
            return (c.dim - 1) // 2
        for key in keys:
            if cd.verma_table[key][t] and c.dim == 2 * p:
                return int(key[0])
        return None

    order = sorted(range(len(classes)), key=lambda t: (label(t), t))
    # above the bound the radical is not computed
    semi = is_semisimple(u, seed, bound) if cd.dim_u <= bound else None
    out = {"case": case, "field": ctx.header(), "dimU": cd.dim_u,
           "simples": [], "semisimple": semi}
    ptab = pim_table(u, classes, seed) if pims else {}
    for t in order:
        c = classes[t]
        row = {"lambda": label(t), "dim": c.dim, "type": c.type, "pimDim": cd.pim_dims[t]}
        if cd.regular_multiplicity is not None:
            row["regularMultiplicity"] = cd.regular_multiplicity[t]
        if t in ptab:
            row["pimDimFitting"] = ptab[t][0]
            row["endP"] = [ptab[t][1].dim_even, ptab[t][1].dim_odd]
        out["simples"].append(row)
    comp = []
    for key in keys:
        comp.append({"lambda": int(key[0]), "factors": sorted(
            label(t) for t, m in enumerate(cd.verma_table[key]) for _ in range(m))})
    out["verma"] = comp
    if case == "nilregular":
        borel = borel_data(g)
        iso = []
        for lam in range(1, (p - 1) // 2):
            a = baby_verma(u, borel, (ctx.embed(lam),))
            b = baby_verma(u, borel, (ctx.embed(p - lam - 1),))
            iso.append([lam, p - lam - 1, find_isomorphism(a, b) is not None])
        a = baby_verma(u, borel, (0,))
        b = baby_verma(u, borel, (ctx.embed(p - 1),))
        iso.insert(0, [0, p - 1, find_isomorphism(a, b) is not None])
        out["isomorphisms"] = iso
    out["wedderburn"] = cd.wedderburn_ok()
    u.save_cache()
    return out


def osp12_diff(p, case, got) -> list[str]:
    exp = osp12_expected(p, case)
    rows = got["simples"]
    diffs = []
    if len(rows) != exp["count"]:
        diffs.append(f"count {len(rows)} != {exp['count']}")
    if sorted(r["dim"] for r in rows) != sorted(exp["dims"]):
        diffs.append("dims differ")
    if [r["type"] for r in rows] != exp["types"]:
        diffs.append("types differ")
    if sorted(r["pimDim"] for r in rows) != sorted(exp["pim"]):
        diffs.append("PIM dims differ")
    if got["semisimple"] is not None and got["semisimple"] != exp["semisimple"]:
        diffs.append("semisimplicity differs")
    if not got["wedderburn"]:
        diffs.append("Wedderburn count fails")
    for r in rows:
        if "pimDimFitting" in r and r["pimDimFitting"] != r["pimDim"]:
            diffs.append(f"Fitting PIM dim differs at lambda={r['lambda']}")
    if "regular" in exp and [r.get("regularMultiplicity") for r in rows] != exp["regular"]:
        diffs.append("regular multiplicities differ")
    if "endP" in exp and [r.get("endP") for r in rows] != exp["endP"]:
        diffs.append("End(P) dims differ")
    if case == "zero":
        for v in got["verma"]:
            if sorted(v["factors"]) != sorted([v["lambda"], p - 1 - v["lambda"]]):
                diffs.append(f"composition of Z({v['lambda']}) differs")
    if case == "nilregular" and not all(x[2] for x in got["isomorphisms"]):
        diffs.append("Z(lambda) and Z(p-lambda-1) not isomorphic")
    return diffs


def cmd_osp12(cfg: RunConfig):
    cases = ["zero"] if cfg.p >= 7 else ["ssregular", "nilregular", "zero"]
    if cfg.chi in ("ssregular", "nilregular") and cfg.p < 7:
        cases = [cfg.chi]
    tables, diffs = [], {}
    for case in cases:
        t = osp12_case(cfg.p, case, cfg.seed, cfg.cache, pims=(cfg.p <= 5), bound=cfg.dim_bound)
        tables.append(t)
        diffs[case] = osp12_diff(cfg.p, case, t)
    ok = not any(diffs.values())
    return _envelope("osp12", cfg, {"tables": tables, "diffs": diffs}, ok), ok


def cmd_morita(cfg: RunConfig):
    g = build_algebra(cfg)
    chi = resolve_chi(g, cfg.chi)
    chi_s, chi_n = jordan_decomp_chi(g, chi)
    try:
        rep = morita_desk_check(g, chi, cfg.seed)
    except FieldTooSmallError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rs = root_decomposition(g)
    levi = rep.levi
    phi_s = [a for a in levi.system.positive if a in set(levi.phi_l)]
    seq = enumerate_phi_u(rs, phi_s, levi.phi_u)
    body = {"chiS": chi_s.codes(), "chiN": chi_n.codes(), "levi": levi.to_json(),
            "phiU": seq.to_json(), "morita": rep.to_json()}
    ok = rep.ok and seq.ok
    return _envelope("morita", cfg, body, ok), ok


COMMANDS = {"algebra": cmd_algebra, "grading": cmd_grading, "kw": cmd_kw,
            "osp12": cmd_osp12, "morita": cmd_morita}


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value configuration file")
    common.add_argument("--p", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--family")
    common.add_argument("--dims", type=int, nargs="+", metavar="M N",
                        help="m n for gl/sl, M 2n for osp, r for the torus")
    common.add_argument("--chi", help="zero | nilregular | ssregular | explicit:lab=v,... | partitions:l;m")
    common.add_argument("--seed", type=int)
    common.add_argument("--dim-bound", dest="dim_bound", type=int)
    common.add_argument("--cache")
    common.add_argument("--format", choices=["json", "csv"])
    parser = _Parser(prog="modsuper", description="Modular representations of Lie superalgebras.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        report, ok = COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"modsuper: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DimensionBoundError, FieldTooSmallError) as exc:
        print(f"modsuper: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownError as exc:
        print(f"modsuper: unknown: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (ReductionError, AssertionError) as exc:
        print(f"modsuper: check failed: {exc}", file=sys.stderr)
        return EXIT_THEOREM
    sys.stdout.write(render(report, cfg.format))
    return EXIT_OK if ok else EXIT_THEOREM


if __name__ == "__main__":
    sys.exit(main())
