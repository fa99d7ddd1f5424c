"""Command line front end: presentation files in, verdict reports out.

The input format is line based: ``key = value`` pairs and ``begin NAME [ARG]``
... ``end`` blocks of matrix rows or vectors.  docs/format.md has the grammar.
Exit codes: 0 pass, 1 a check failed, 2 undecided, 3 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import re
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from . import __version__
from .algebra import (
    Bimodule, cyclic_group_algebra, dual_numbers, ground_field, group_algebra, make_algebra,
    upper_triangular,
)
from .entwine import (
    Braiding, Entwining, SmashProduct, braided_bimodule, check_braiding, group_braiding,
    lemma1_isomorphism, left_action_compatibility, smash_koszul_resolution, smash_presentation,
    SmashResolution,
)
from .errors import (
    AlgebraError, DimensionCapExceeded, InputError, NoFreeGenerator, ParseError, ValidationError,
)
from .exactlin import Field, Matrix, QQ, is_prime
from .gorenstein import build_U_e, check_gorenstein, extract_sigma
from .pbw import (
    DeformationData, build_p_complex_pdim2, check_theorem_a, check_theorem_b, is_pbw_up_to,
    lemma6_suite, smash_deformation, verify_homotopy_identity, SplittingData,
)
from .quadratic import (
    QuadraticPresentation, bimodule_complex, is_koszul, koszul_resolution, pdim2_precondition,
)
from .report import VerdictReport

EXIT_INPUT = 3

ALGEBRA_KINDS = ("ground", "cyclic", "dual_numbers", "upper_triangular", "group", "structure")
MODULE_KINDS = ("bimodule", "braided", "group_action")
BOUND_KEYS = ("deg_max", "n_max", "n_sat", "trial_budget", "seed")
DEFAULT_BOUNDS = {"deg_max": 5, "n_max": 4, "n_sat": 6, "trial_budget": 64, "seed": 0}


# ---------------------------------------------------------------- file model

@dataclass
class PresentationFile:
    """Validated contents of a presentation file.

    Scalars are kept as canonical strings of the declared field and vectors
    as sorted (index, scalar) lists, so that equality is structural.
    """
    field_name: str = "Q"
    name: str = ""
    algebra: str = "ground"
    algebra_arg: int | None = None
    group_table: list | None = None
    S_dim: int | None = None
    S_unit: list | None = None
    S_mult: dict = dc_field(default_factory=dict)
    module: str = "bimodule"
    M_dim: int | None = None
    V_dim: int | None = None
    left: dict = dc_field(default_factory=dict)
    right: dict = dc_field(default_factory=dict)
    psi: list | None = None
    action: dict = dc_field(default_factory=dict)
    relations: list = dc_field(default_factory=list)
    phi: list | None = None
    phi_in: str = "M"
    theta: list | None = None
    sigma: str | None = None
    e: list | None = None
    bounds: dict = dc_field(default_factory=dict)
    gorenstein: dict = dc_field(default_factory=dict)

    def field_obj(self) -> Field:
        return _field_from(self.field_name, 0)

    def bound(self, key):
        return self.bounds.get(key, DEFAULT_BOUNDS[key])


_FIELD_RE = re.compile(r"^(Q|GF\((\d+)\))$")


def _field_from(text: str, lineno: int) -> Field:
    m = _FIELD_RE.match(text.replace(" ", ""))
    if not m:
        raise ParseError(f"line {lineno}: field must be Q or GF(p), got {text!r}")
    if m.group(2) is None:
        return QQ
    p = int(m.group(2))
    if not is_prime(p):
        raise ValidationError(f"line {lineno}: GF({p}) needs a prime modulus", witness=p)
    return Field.prime(p)


def _canon(F: Field, tok: str, lineno: int) -> str:
    try:
        return F.format(F(F.parse(tok)))
    except (ParseError, ValueError, TypeError) as exc:
        raise ParseError(f"line {lineno}: bad scalar {tok!r}") from exc


def _vector(F: Field, toks: list, lineno: int) -> list:
    """Dense row or sparse ``i:c`` tokens to sorted (index, scalar) pairs."""
    out = {}
    if toks and all(":" in t for t in toks):
        for t in toks:
            i, c = t.split(":", 1)
            try:
                idx = int(i)
            except ValueError as exc:
                raise ParseError(f"line {lineno}: bad index {i!r}") from exc
            if idx < 0:
                raise ValidationError(f"line {lineno}: negative index {idx}", witness=idx)
            c = _canon(F, c, lineno)
            if c != "0":
                out[idx] = c
    elif any(":" in t for t in toks):
        raise ParseError(f"line {lineno}: mixed dense and sparse entries")
    else:
        for idx, t in enumerate(toks):
            c = _canon(F, t, lineno)
            if c != "0":
                out[idx] = c
    return sorted(out.items())


def _tokens(line: str) -> list:
    return line.split("#", 1)[0].split()


def parse_text(text: str) -> PresentationFile:
    pf = PresentationFile()
    lines = text.splitlines()
    F = None
    seen = set()
    i = 0
    pending = []
    # the field must be known before scalars are read
    for n, raw in enumerate(lines, 1):
        toks = _tokens(raw)
        if len(toks) >= 3 and toks[0] == "field" and toks[1] == "=":
            F = _field_from("".join(toks[2:]), n)
            pf.field_name = "Q" if F.p is None else f"GF({F.p})"
    F = F or QQ
    while i < len(lines):
        n = i + 1
        toks = _tokens(lines[i])
        i += 1
        if not toks:
            continue
        if toks[0] == "begin":
            if len(toks) not in (2, 3):
                raise ParseError(f"line {n}: expected 'begin NAME [INDEX]'")
            name = toks[1]
            arg = None
            if len(toks) == 3:
                try:
                    arg = int(toks[2])
                except ValueError as exc:
                    raise ParseError(f"line {n}: block index must be an integer") from exc
            rows = []
            while True:
                if i >= len(lines):
                    raise ParseError(f"line {n}: block {name!r} is not closed by 'end'")
                rt = _tokens(lines[i])
                i += 1
                if rt == ["end"]:
                    break
                if rt:
                    rows.append((i, rt))
            pending.append((n, name, arg, rows))
            continue
        if len(toks) < 3 or toks[1] != "=":
            raise ParseError(f"line {n}: expected 'key = value' or a block")
        key, value = toks[0], toks[2:]
        if key in seen:
            raise ParseError(f"line {n}: duplicate key {key!r}")
        seen.add(key)
        _set_key(pf, F, key, value, n)
    for n, name, arg, rows in pending:
        _set_block(pf, F, name, arg, rows, n)
    validate(pf)
    return pf


def _int(value, n, key):
    try:
        return int(value)
    except ValueError as exc:
        raise ParseError(f"line {n}: {key} must be an integer") from exc


def _set_key(pf, F, key, value, n):
    if key == "field":
        return
    if key == "name":
        pf.name = " ".join(value)
    elif key == "algebra":
        kind = value[0]
        if kind not in ALGEBRA_KINDS:
            raise ParseError(f"line {n}: unknown algebra kind {kind!r}")
        pf.algebra = kind
        if kind == "cyclic":
            if len(value) != 2:
                raise ParseError(f"line {n}: 'algebra = cyclic N' needs the order")
            pf.algebra_arg = _int(value[1], n, "cyclic order")
    elif key == "S.dim":
        pf.S_dim = _int(value[0], n, key)
    elif key == "S.unit":
        pf.S_unit = _vector(F, value, n)
    elif key == "module":
        if value[0] not in MODULE_KINDS:
            raise ParseError(f"line {n}: unknown module kind {value[0]!r}")
        pf.module = value[0]
    elif key == "M.dim":
        pf.M_dim = _int(value[0], n, key)
    elif key == "V.dim":
        pf.V_dim = _int(value[0], n, key)
    elif key == "phi.space":
        if value[0] not in ("M", "V"):
            raise ParseError(f"line {n}: phi.space must be M or V")
        pf.phi_in = value[0]
    elif key == "sigma":
        if value[0] != "auto":
            raise ParseError(f"line {n}: only 'sigma = auto' is supported")
        pf.sigma = "auto"
    elif key == "e":
        pf.e = _vector(F, value, n)
    elif key in BOUND_KEYS:
        pf.bounds[key] = _int(value[0], n, key)
    elif key in ("gorenstein.d", "gorenstein.l"):
        pf.gorenstein[key.split(".")[1]] = _int(value[0], n, key)
    elif key == "gorenstein.window":
        if len(value) != 2:
            raise ParseError(f"line {n}: window needs two integers")
        pf.gorenstein["window"] = [_int(v, n, key) for v in value]
    else:
        raise ParseError(f"line {n}: unknown key {key!r}")


def _set_block(pf, F, name, arg, rows, n):
    def matrix():
        return [[_canon(F, t, ln) for t in toks] for ln, toks in rows]

    def vectors():
        return [_vector(F, toks, ln) for ln, toks in rows]

    if name in ("mult", "left", "right", "action") and arg is None:
        raise ParseError(f"line {n}: block {name!r} needs an index")
    if name == "group_table":
        pf.group_table = [[_int(t, ln, "group table entry") for t in toks] for ln, toks in rows]
    elif name == "mult":
        pf.S_mult[arg] = matrix()
    elif name == "left":
        pf.left[arg] = matrix()
    elif name == "right":
        pf.right[arg] = matrix()
    elif name == "psi":
        pf.psi = matrix()
    elif name == "action":
        pf.action[arg] = matrix()
    elif name == "relations":
        pf.relations = vectors()
    elif name == "phi":
        pf.phi = vectors()
    elif name == "theta":
        pf.theta = vectors()
    else:
        raise ParseError(f"line {n}: unknown block {name!r}")


def parse(path) -> PresentationFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_text(text)


# ---------------------------------------------------------------- serialisation

def _fmt_vec(v) -> str:
    return " ".join(f"{i}:{c}" for i, c in v) if v else "0:0"


def serialize(pf: PresentationFile) -> str:
    out = []
    if pf.name:
        out.append(f"name = {pf.name}")
    out.append(f"field = {pf.field_name}")
    out.append(f"algebra = {pf.algebra}" + (f" {pf.algebra_arg}" if pf.algebra_arg is not None else ""))
    if pf.S_dim is not None:
        out.append(f"S.dim = {pf.S_dim}")
    if pf.S_unit is not None:
        out.append(f"S.unit = {_fmt_vec(pf.S_unit)}")
    if pf.group_table is not None:
        out.append("begin group_table")
        out += [" ".join(map(str, r)) for r in pf.group_table]
        out.append("end")
    for k in sorted(pf.S_mult):
        out.append(f"begin mult {k}")
        out += [" ".join(r) for r in pf.S_mult[k]]
        out.append("end")
    out.append(f"module = {pf.module}")
    if pf.M_dim is not None:
        out.append(f"M.dim = {pf.M_dim}")
    if pf.V_dim is not None:
        out.append(f"V.dim = {pf.V_dim}")
    for name, blocks in (("left", pf.left), ("right", pf.right), ("action", pf.action)):
        for k in sorted(blocks):
            out.append(f"begin {name} {k}")
            out += [" ".join(r) for r in blocks[k]]
            out.append("end")
    if pf.psi is not None:
        out.append("begin psi")
        out += [" ".join(r) for r in pf.psi]
        out.append("end")
    out.append("begin relations")
    out += [_fmt_vec(v) for v in pf.relations]
    out.append("end")
    if pf.phi_in != "M":
        out.append(f"phi.space = {pf.phi_in}")
    for name, vecs in (("phi", pf.phi), ("theta", pf.theta)):
        if vecs is not None:
            out.append(f"begin {name}")
            out += [_fmt_vec(v) for v in vecs]
            out.append("end")
    if pf.sigma:
        out.append(f"sigma = {pf.sigma}")
    if pf.e is not None:
        out.append(f"e = {_fmt_vec(pf.e)}")
    for k in BOUND_KEYS:
        if k in pf.bounds:
            out.append(f"{k} = {pf.bounds[k]}")
    for k in ("d", "l"):
        if k in pf.gorenstein:
            out.append(f"gorenstein.{k} = {pf.gorenstein[k]}")
    if "window" in pf.gorenstein:
        out.append("gorenstein.window = " + " ".join(map(str, pf.gorenstein["window"])))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- model building

@dataclass
class Model:
    file: PresentationFile
    F: Field
    S: object
    pres: QuadraticPresentation
    braiding: Braiding | None
    relations: list          # dict vectors as given
    defo: DeformationData


def _dict(F, v) -> dict:
    return {i: F(F.parse(c)) for i, c in v}


def _mat(F, rows, nrows, ncols, what) -> Matrix:
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise ValidationError(f"{what} must be a {nrows} x {ncols} matrix",
                              witness={"rows": len(rows)})
    return Matrix.from_rows(F, [[F(F.parse(c)) for c in r] for r in rows])


def build_algebra(pf: PresentationFile, F: Field):
    kind = pf.algebra
    if kind == "ground":
        return ground_field(F)
    if kind == "cyclic":
        if not pf.algebra_arg or pf.algebra_arg < 1:
            raise ValidationError("cyclic order must be positive")
        return cyclic_group_algebra(F, pf.algebra_arg)
    if kind == "dual_numbers":
        return dual_numbers(F)
    if kind == "upper_triangular":
        return upper_triangular(F)
    if kind == "group":
        t = pf.group_table
        if not t or any(len(r) != len(t) for r in t):
            raise ValidationError("group_table must be square")
        if any(x < 0 or x >= len(t) for r in t for x in r):
            raise ValidationError("group_table entries out of range")
        return group_algebra(F, t)
    d = pf.S_dim
    if d is None or pf.S_unit is None:
        raise ValidationError("structure algebras need S.dim and S.unit")
    mult = []
    for k in range(d):
        if k not in pf.S_mult:
            raise ValidationError(f"missing 'begin mult {k}' block", witness=k)
        m = _mat(F, pf.S_mult[k], d, d, f"mult {k}")
        mult.append([m.rows()[j] for j in range(d)])
    unit = _dict(F, pf.S_unit)
    if any(i >= d for i in unit):
        raise ValidationError("S.unit has an index outside S", witness=max(unit))
    return make_algebra(F, d, mult, unit)


def build(pf: PresentationFile) -> Model:
    F = pf.field_obj()
    S = build_algebra(pf, F)
    ds = S.dim
    rels = [_dict(F, v) for v in pf.relations]
    br = None
    if pf.module == "bimodule":
        m = pf.M_dim
        if m is None:
            raise ValidationError("module = bimodule needs M.dim")
        left = [_mat(F, pf.left.get(k, []), m, m, f"left {k}") for k in range(ds)]
        right = [_mat(F, pf.right.get(k, []), m, m, f"right {k}") for k in range(ds)]
        M = Bimodule(S, m, left, right)
        M.validate()
        pres = QuadraticPresentation.from_ambient(S, M, rels, name=pf.name)
    else:
        dv = pf.V_dim
        if dv is None:
            raise ValidationError(f"module = {pf.module} needs V.dim")
        if pf.module == "braided":
            if pf.psi is None:
                raise ValidationError("module = braided needs a psi block")
            br = Braiding(S, dv, _mat(F, pf.psi, dv * ds, ds * dv, "psi"))
        else:
            rep = [_mat(F, pf.action.get(k, []), dv, dv, f"action {k}") for k in range(ds)]
            br = group_braiding(S, rep)
        for r in rels:
            if r and max(r) >= dv * dv:
                raise ValidationError(f"relation coordinate {max(r)} outside V(x)V "
                                      f"of dimension {dv * dv}", witness=max(r))
        ok = check_braiding(br)
        if not ok.ok:
            raise ValidationError("psi violates the braiding axioms",
                                  witness=[c.witness for c in ok.checks if c.status != "pass"])
        pres = smash_presentation(br, rels, name=pf.name)
    defo = _deformation(pf, F, S, pres, br, rels)
    return Model(pf, F, S, pres, br, rels, defo)


def _deformation(pf, F, S, pres, br, rels) -> DeformationData:
    if pf.phi is None and pf.theta is None:
        return DeformationData.zero(pres)
    for name, vecs, dim in (("phi", pf.phi, None), ("theta", pf.theta, S.dim)):
        if vecs is not None and len(vecs) != len(rels):
            raise ValidationError(f"{name} needs one row per relation",
                                  witness={"rows": len(vecs), "relations": len(rels)})
    theta = [_dict(F, v) for v in pf.theta] if pf.theta is not None else None
    if theta and any(v and max(v) >= S.dim for v in theta):
        raise ValidationError("theta value outside S")
    phi = [_dict(F, v) for v in pf.phi] if pf.phi is not None else None
    if phi is not None and pf.phi_in == "V":
        if br is None:
            raise ValidationError("phi.space = V needs a braided or group_action module")
        phi = [{v * S.dim + u: c * x for v, c in p.items() for u, x in S.unit.items()}
               for p in phi]
    if phi and any(v and max(v) >= pres.M.dim for v in phi):
        raise ValidationError("phi value outside M")
    if br is not None:
        return smash_deformation(pres, phi, theta, relations=rels)
    proj = pres.tensor.space(2).projection
    gens = [proj.apply(r) for r in rels]
    return DeformationData.from_values(pres, gens, phi, theta)


def validate(pf: PresentationFile) -> None:
    """Input errors only; mathematical failures such as unstable relations
    are reported by the commands."""
    try:
        build(pf)
    except InputError:
        raise
    except AlgebraError:
        pass


# ---------------------------------------------------------------- commands

def cmd_check_algebra(model: Model, args) -> VerdictReport:
    rep = VerdictReport("algebra data")
    S, pres = model.S, model.pres
    rep.add("S_associative_unital", True, f"dim S = {S.dim}")
    rep.add("M_bimodule", True, f"dim M = {pres.M.dim}")
    rep.add("R_subbimodule", True, f"dim R = {pres.R.dim}")
    B = pres.graded(min(args.deg_max, 4))
    bad = B.check_associative(min(args.deg_max, 4))
    rep.add("B_associative", not bad, witness=bad[0] if bad else None)
    rep.tables["dim_B"] = [("n", "dim B_n")] + [(n, B.dim(n)) for n in range(min(args.deg_max, 4) + 1)]
    rep.info.update({"dim_S": S.dim, "dim_M": pres.M.dim, "dim_R": pres.R.dim})
    return rep


def cmd_check_braiding(model: Model, args) -> VerdictReport:
    if model.braiding is None:
        raise ValidationError("check-braiding needs module = braided or group_action")
    br = model.braiding
    rep = check_braiding(br)
    rep.add("bijective", br.bijective, witness=None if br.bijective else "Psi_1 not invertible")
    rep.add("relations_stable", True, "Psi_T(S (x) R) inside R (x) S")
    n = min(args.n_max, 3)
    ent = Entwining(br, model.pres.smash.classical, n)
    rep.merge(ent.check(n), prefix="entwining.")
    E = SmashProduct(ent)
    bad = E.check_associative(n)
    rep.add("smash_associative", not bad, f"degrees <= {n}", bad[0] if bad else None)
    unital = E.check_unit(n)
    rep.add("smash_unital", unital, f"degrees <= {n}", None if unital else "1 (x) 1 not a two-sided unit")
    _, _, iso = lemma1_isomorphism(braided_bimodule(br), n)
    rep.merge(iso, prefix="tensor_iso.")
    return rep


def cmd_check_koszul(model: Model, args) -> VerdictReport:
    return is_koszul(model.pres, args.deg_max)


def cmd_check_pbw_a(model: Model, args) -> VerdictReport:
    return check_theorem_a(model.defo, args.deg_max)


def cmd_check_pbw_b(model: Model, args) -> VerdictReport:
    return check_theorem_b(model.defo)


def cmd_oracle(model: Model, args) -> VerdictReport:
    return is_pbw_up_to(model.defo, args.n_max, args.n_sat)


def _complex_checks(rep, label, cx, deg_max):
    dd = cx.d_squared_failures()
    rep.add(f"{label}.d_squared_zero", not dd, witness=dd or None)
    ex = cx.exactness_failures(deg_max)
    rep.add(f"{label}.exact", not ex, f"internal degrees <= {deg_max}", ex[0] if ex else None)


def cmd_resolution(model: Model, args) -> VerdictReport:
    pres, deg = model.pres, min(args.deg_max, 4)
    rep = VerdictReport("resolutions")
    _complex_checks(rep, "koszul", koszul_resolution(pres, deg), deg)
    _complex_checks(rep, "bimodule", bimodule_complex(pres, deg), deg)
    ok, w = pdim2_precondition(pres)
    # the P complex needs M(x)R and R(x)M to meet trivially; otherwise it is skipped
    rep.info["precondition_pdim2"] = ok
    if ok:
        sd = SplittingData(pres, deg)
        rep.merge(verify_homotopy_identity(pres, deg, sd), prefix="homotopy.")
        rep.merge(lemma6_suite(pres, deg), prefix="sections.")
        _complex_checks(rep, "p_complex", build_p_complex_pdim2(pres, 3, deg, sd), deg)
    if model.braiding is not None:
        A = pres.smash.classical
        cx, l2 = smash_koszul_resolution(A, model.braiding, args.n_max, deg)
        _complex_checks(rep, "smash", cx, deg)
        rep.merge(l2, prefix="smash.")
        res = SmashResolution(A, model.braiding, min(args.n_max, 3), deg)
        rep.merge(left_action_compatibility(res), prefix="smash.")
    return rep


def cmd_gorenstein(model: Model, args) -> VerdictReport:
    g = model.file.gorenstein
    window = tuple(g.get("window", (-args.deg_max, args.deg_max)))
    cert = check_gorenstein(model.pres, g.get("d", 2), g.get("l", 2), window,
                            seed=args.seed, budget=args.trial_budget)
    return cert.report


def cmd_deform_sigma(model: Model, args) -> VerdictReport:
    sd = extract_sigma(model.pres, seed=args.seed, budget=args.trial_budget)
    rep = VerdictReport("twisting automorphism and U_e")
    rep.add("sigma_automorphism", True)
    rep.tables["sigma"] = [[model.F.format(x) for x in row] for row in sd.sigma.to_rows()]
    rep.tables["e_space"] = [[model.F.format(x) for x in row] for row in sd.e_space.basis_rows()]
    rep.info["r0"] = sd.r0
    rep.info["sigma_is_identity"] = sd.sigma == Matrix.identity(model.F, model.S.dim)
    if model.file.e is not None:
        _, ue = build_U_e(model.pres, sd, _dict(model.F, model.file.e), args.n_max, args.n_sat,
                          min(args.deg_max, 4))
        rep.merge(ue, prefix="U_e.")
    return rep


COMMANDS = {
    "check-algebra": cmd_check_algebra,
    "check-braiding": cmd_check_braiding,
    "check-koszul": cmd_check_koszul,
    "check-pbw-a": cmd_check_pbw_a,
    "check-pbw-b": cmd_check_pbw_b,
    "oracle": cmd_oracle,
    "resolution": cmd_resolution,
    "gorenstein": cmd_gorenstein,
    "deform-sigma": cmd_deform_sigma,
}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pbwkit", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"pbwkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        c = sub.add_parser(name)
        c.add_argument("input")
        c.add_argument("--deg-max", type=int, default=None)
        c.add_argument("--n-max", type=int, default=None)
        c.add_argument("--n-sat", type=int, default=None)
        c.add_argument("--seed", type=int, default=None)
        c.add_argument("--trial-budget", type=int, default=None)
        c.add_argument("--report", default=None, help="write a JSON report to this path")
        c.add_argument("--quiet", action="store_true")
    return p


def _resolve_bounds(args, pf: PresentationFile):
    # flags override file values, which override the defaults
    for key in BOUND_KEYS:
        if getattr(args, key) is None:
            setattr(args, key, pf.bound(key))


def _error_report(command, exc, status) -> VerdictReport:
    rep = VerdictReport(command)
    rep.add(type(exc).__name__, status, str(exc), exc.witness)
    return rep


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    data = b""
    try:
        data = Path(args.input).read_bytes()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    digest = hashlib.sha256(data).hexdigest()
    try:
        pf = parse_text(data.decode())
        _resolve_bounds(args, pf)
        model = build(pf)
        rep = COMMANDS[args.command](model, args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {exc.witness}", file=sys.stderr)
        return EXIT_INPUT
    except (NoFreeGenerator, DimensionCapExceeded) as exc:
        rep = _error_report(args.command, exc, None)
    except AlgebraError as exc:
        rep = _error_report(args.command, exc, False)
    if not args.quiet:
        out.write(rep.to_text())
    if args.report:
        extra = {"tool": "pbwkit", "version": __version__, "command": args.command,
                 "input_sha256": digest,
                 "bounds": {k: getattr(args, k) for k in BOUND_KEYS}}
        Path(args.report).write_text(rep.to_json(extra))
    return rep.exit_code()


if __name__ == "__main__":
    sys.exit(main())
