"""Manifest-driven command line front end.

One command per invocation; reports are canonical JSON (default) or aligned
text tables.  Exit codes: 0 computed/pass, 1 checked-and-failed, 2 usage or
manifest error, 3 inconclusive (window too small for a verdict).
"""

import sys

import click

from .algebra import (
    StabilizationError,
    beilinson,
    c_of_a,
    check_automorphism,
    find_central_degree2,
    is_central,
    is_regular_central,
    koszul_dual,
    quasi_veronese,
    semisimple_type,
    twist,
    veronese,
)
from .field import QQ, field_from_spec
from .freealg import format_poly
from .gradedmod import (
    FreeModule,
    WindowError,
    ext_graded,
    euler_check,
    hom_graded,
    is_isomorphic,
    mcm_check,
    resolve,
    trivial_quotient_module,
    verify_mf,
)
from .helix import (
    MissingNuError,
    MutationError,
    ObjectHandle,
    check_geometric_helix,
    check_relative_exceptional,
    classify_standard,
    left_mutation,
    regularity_evidence,
    right_mutation,
    section_algebra,
)
from .manifest import ManifestError, load_manifest
from .report import EXIT_INCONCLUSIVE, EXIT_USAGE, Report, table_payload


class Ctx:
    def __init__(self, manifest):
        self.manifest = manifest
        self._pipeline = None
        self._main = None

    def main_tab(self):
        if self._main is None:
            main, label = self.manifest.main_algebra()
            self._main = (main.tabulate(), label)
        return self._main

    def pipeline(self):
        if self._pipeline is None:
            self._pipeline = self.manifest.build_pipeline()
        return self._pipeline

    def module_for(self, spec):
        spec = spec.strip()
        mod_decl = self.manifest.data.get("module")
        if spec == "k":
            tab, _ = self.main_tab()
            return trivial_quotient_module(tab, name="k")
        if mod_decl is not None and spec == mod_decl.get("name", "M"):
            return self.manifest.module()
        if "pipeline" in self.manifest.data:
            return self.pipeline().module_of(ObjectHandle.parse(spec))
        if spec == "A":
            tab, _ = self.main_tab()
            return FreeModule(tab, [0], name="A")
        raise ManifestError("cannot resolve object %r in this manifest" % spec)


def _parse_window(s):
    lo, _, hi = s.partition("..")
    return int(lo), int(hi)


pass_ctx = click.make_pass_decorator(dict)


@click.group()
@click.option("--truncation", type=int, default=None, help="override degree bound D")
@click.option("--hbound", type=int, default=None, help="override homological bound")
@click.option("--field", "field_spec", default=None, help="q or p:<prime>")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json")
@click.option("--out", type=click.Path(), default=None, help="write report to file")
@click.pass_context
def main(ctx, truncation, hbound, field_spec, fmt, out):
    """ncgrade: exact verification workbench for graded noncommutative algebras."""
    ctx.obj = {
        "truncation": truncation,
        "hbound": hbound,
        "field": field_spec,
        "format": fmt,
        "out": out,
    }


def _load(opts, manifest_ref):
    manifest = load_manifest(manifest_ref)
    if opts["truncation"] is not None:
        manifest.truncation = opts["truncation"]
    if opts["hbound"] is not None:
        manifest.hbound = opts["hbound"]
    if opts["field"] is not None:
        manifest.field = field_from_spec(opts["field"])
    return Ctx(manifest)


def _emit(opts, report):
    data = report.to_json() if opts["format"] == "json" else report.to_table()
    if opts["out"]:
        with open(opts["out"], "w") as fh:
            fh.write(data)
    else:
        click.echo(data, nl=False)
    sys.exit(report.exit_code())


def _run(opts, manifest_ref, command, body):
    try:
        ctx = _load(opts, manifest_ref)
        bounds = {"truncation": ctx.manifest.truncation, "hbound": ctx.manifest.hbound}
        report = Report(command, ctx.manifest, bounds, ctx.manifest.field)
        body(ctx, report)
    except ManifestError as exc:
        click.echo("manifest error: %s" % exc, err=True)
        sys.exit(EXIT_USAGE)
    except MissingNuError as exc:
        click.echo("missing data: %s" % exc, err=True)
        sys.exit(EXIT_USAGE)
    except (StabilizationError, WindowError) as exc:
        click.echo("inconclusive: %s" % exc, err=True)
        sys.exit(EXIT_INCONCLUSIVE)
    _emit(opts, report)


def _cmd(name):
    def deco(fn):
        return main.command(name=name)(fn)
    return deco


@_cmd("hilbert")
@click.argument("manifest")
@pass_ctx
def cmd_hilbert(opts, manifest):
    """Hilbert series of the manifest's algebra (after [target])."""

    def body(ctx, report):
        tab, label = ctx.manifest.target_algebra()
        hs = tab.hilbert()
        report.set("algebra", label)
        report.set("series", hs.coeffs)
        report.set("closed_form", hs.closed_form)
        report.set("bound", tab.D)

    _run(opts, manifest, "hilbert", body)


@_cmd("gb")
@click.argument("manifest")
@pass_ctx
def cmd_gb(opts, manifest):
    """Truncated reduced Groebner basis of the manifest's main algebra."""

    def body(ctx, report):
        main_alg, label = ctx.manifest.main_algebra()
        gb = main_alg.gb
        report.set("algebra", label)
        report.set("elements", [format_poly(e) for e in gb.elements])
        report.set("element_count", len(gb.elements))
        report.set("normal_word_counts", main_alg.dims())
        report.set("truncation", gb.truncation)

    _run(opts, manifest, "gb", body)


@_cmd("veronese")
@click.argument("manifest")
@click.option("-r", type=int, required=True)
@pass_ctx
def cmd_veronese(opts, manifest, r):
    """Veronese subalgebra dims of the manifest's algebra."""

    def body(ctx, report):
        tab, label = ctx.manifest.target_algebra()
        v = veronese(tab, r)
        hs = v.hilbert()
        report.set("algebra", "%s^(%d)" % (label, r))
        report.set("series", hs.coeffs)
        report.set("closed_form", hs.closed_form)

    _run(opts, manifest, "veronese", body)


@_cmd("qveronese")
@click.argument("manifest")
@click.option("-r", type=int, required=True)
@pass_ctx
def cmd_qveronese(opts, manifest, r):
    """Quasi-Veronese dims and degree-0 block structure."""

    def body(ctx, report):
        tab, label = ctx.manifest.target_algebra()
        qv = quasi_veronese(tab, r)
        hs = qv.hilbert()
        report.set("algebra", "%s^[%d]" % (label, r))
        report.set("series", hs.coeffs)
        report.set("degree0_blocks", qv.meta.get("degree0_blocks"))

    _run(opts, manifest, "qveronese", body)


@_cmd("beilinson")
@click.argument("manifest")
@click.option("-l", "ell", type=int, required=True)
@pass_ctx
def cmd_beilinson(opts, manifest, ell):
    """Beilinson-style degree-0 algebra of the ell-th quasi-Veronese."""

    def body(ctx, report):
        tab, label = ctx.manifest.target_algebra()
        alg = beilinson(tab, ell)
        report.set("algebra", "nabla %s (l=%d)" % (label, ell))
        report.set("dimension", alg.dim)
        report.set("blocks", alg.meta.get("blocks"))
        if ctx.manifest.field == QQ:
            report.set("analysis", semisimple_type(alg))

    _run(opts, manifest, "beilinson", body)


@_cmd("twist")
@click.argument("manifest")
@pass_ctx
def cmd_twist(opts, manifest):
    """Twist the ambient algebra by the [automorphism] images."""

    def body(ctx, report):
        images = ctx.manifest.automorphism_images()
        if images is None:
            raise ManifestError("twist needs an [automorphism] section")
        ambient = ctx.manifest.ambient()
        ok, maps, fails = check_automorphism(ambient, images)
        report.set("automorphism", ok)
        if not ok:
            report.set("failures", fails)
            report.status("fail")
            return
        tw = twist(ambient.tabulate(), maps)
        hs = tw.hilbert()
        report.set("series", hs.coeffs)
        report.set("series_preserved", hs.coeffs == ambient.dims())
        report.status("pass")

    _run(opts, manifest, "twist", body)


@_cmd("koszul")
@click.argument("manifest")
@pass_ctx
def cmd_koszul(opts, manifest):
    """Koszul dual of the main algebra, with the numerical duality check."""

    def body(ctx, report):
        main_alg, label = ctx.manifest.main_algebra()
        dual = koszul_dual(main_alg)
        dims_a = main_alg.dims()
        dims_d = dual.dims()
        D = main_alg.truncation
        identity = all(
            sum((-1) ** i * dims_a[i] * dims_d[d - i] for i in range(d + 1))
            == (1 if d == 0 else 0)
            for d in range(D + 1)
        )
        hs = dual.hilbert()
        report.set("algebra", label + "!")
        report.set("series", dims_d)
        report.set("closed_form", hs.closed_form)
        report.set("koszul_identity", identity)
        report.status("pass" if identity else "fail")

    _run(opts, manifest, "koszul", body)


@_cmd("central")
@click.argument("manifest")
@pass_ctx
def cmd_central(opts, manifest):
    """Verify the [central] element is central and regular in the ambient."""

    def body(ctx, report):
        f = ctx.manifest.central_poly()
        if f is None:
            raise ManifestError("central needs a [central] section")
        ambient = ctx.manifest.ambient()
        tab = ambient.tabulate()
        deg, coords = ambient.element_coords(f)
        central = is_central(tab, deg, coords)
        regular = central and is_regular_central(tab, deg, coords)
        report.set("element", format_poly(f))
        report.set("degree", deg)
        report.set("central", central)
        report.set("regular", regular)
        report.set("verified_up_to_degree", tab.D)
        report.status("pass" if central and regular else "fail")

    _run(opts, manifest, "central", body)


@_cmd("cofa")
@click.argument("manifest")
@pass_ctx
def cmd_cofa(opts, manifest):
    """Koszul-dual localization slice C(A) and its semisimple analysis."""

    def body(ctx, report):
        main_alg, label = ctx.manifest.main_algebra()
        dual = koszul_dual(main_alg)
        dtab = dual.tabulate()
        report.set("dual_series", dual.dims())
        candidates = find_central_degree2(dtab)
        regz = [z for z in candidates if is_regular_central(dtab, 2, z, dtab.D - 2)]
        report.set("central_degree2_count", len(candidates))
        report.set("regular_central_count", len(regz))
        if not regz:
            report.set("reason", "no regular central element of degree 2")
            report.status("fail")
            return
        z = regz[0]
        words = dual.basis_words(2)
        from .freealg import NcPoly

        zpoly = NcPoly(dual.gens, {words[i]: c for i, c in z.items()}, dual.field)
        report.set("z", format_poly(zpoly))
        C = c_of_a(dtab, z)
        analysis = semisimple_type(C) if ctx.manifest.field == QQ else {"dimension": C.dim}
        report.set("stabilization_level", C.meta["stabilization_level"])
        report.set("analysis", analysis)
        if ctx.manifest.central_poly() is not None:
            from .algebra import quotient_by_central as qbc

            amb_dual = koszul_dual(ctx.manifest.ambient())
            dual_quot = qbc(dual, zpoly)
            report.set(
                "quotient_matches_ambient_dual",
                dual_quot.dims() == amb_dual.dims(),
            )
        report.status("computed")

    _run(opts, manifest, "cofa", body)


@_cmd("mf-verify")
@click.argument("manifest")
@pass_ctx
def cmd_mf_verify(opts, manifest):
    """Verify the declared matrix factorization(s) over the ambient algebra."""

    def body(ctx, report):
        mf = ctx.manifest.mf_matrices()
        if mf is None:
            raise ManifestError("mf-verify needs a [matrix_factorization] section")
        P, Q, split = mf
        ambient = ctx.manifest.ambient()
        f = ctx.manifest.central_poly()
        pairs = [("P,P", P, P), ("Q,Q", Q, Q)] if split else [("P,Q", P, Q)]
        allok = True
        outcomes = {}
        for tag, a_mat, b_mat in pairs:
            ok, reason = verify_mf(ambient, f, a_mat, b_mat)
            outcomes[tag] = {"pass": ok, "reason": reason}
            allok = allok and ok
        report.set("split", split)
        report.set("pairs", outcomes)
        report.status("pass" if allok else "fail")

    _run(opts, manifest, "mf-verify", body)


@_cmd("resolve")
@click.argument("manifest")
@click.argument("obj", default="X")
@pass_ctx
def cmd_resolve(opts, manifest, obj):
    """Minimal free resolution (Betti data) of a module."""

    def body(ctx, report):
        mod = ctx.module_for(obj)
        res = resolve(mod, ctx.manifest.hbound)
        report.set("object", obj)
        report.set("betti", [{str(k): v for k, v in row.items()} for row in res.betti()])
        report.set("completed", res.completed)
        report.set("euler_identity", euler_check(res))
        report.set("valid_up_to_degree", res.valid_top)

    _run(opts, manifest, "resolve", body)


@_cmd("hom")
@click.argument("manifest")
@click.argument("obj1")
@click.argument("obj2")
@click.option("--window", default="-5..5", help="internal degree window a..b")
@pass_ctx
def cmd_hom(opts, manifest, obj1, obj2, window):
    """Graded Hom table between two objects."""

    def body(ctx, report):
        lo, hi = _parse_window(window)
        m1 = ctx.module_for(obj1)
        m2 = ctx.module_for(obj2)
        table = hom_graded(m1, m2, range(lo, hi + 1))
        report.set("pair", [obj1, obj2])
        report.set("q", 0)
        report.set("hom", table_payload(table))

    _run(opts, manifest, "hom", body)


@_cmd("ext")
@click.argument("manifest")
@click.argument("obj1")
@click.argument("obj2")
@click.option("--q", "qq", type=int, default=1)
@click.option("--window", default="-5..5")
@pass_ctx
def cmd_ext(opts, manifest, obj1, obj2, qq, window):
    """Graded Ext^q table between two objects."""

    def body(ctx, report):
        lo, hi = _parse_window(window)
        m1 = ctx.module_for(obj1)
        m2 = ctx.module_for(obj2)
        table = ext_graded(m1, m2, qq, range(lo, hi + 1))
        report.set("pair", [obj1, obj2])
        report.set("q", qq)
        report.set("ext", table_payload(table))

    _run(opts, manifest, "ext", body)


@_cmd("mcm")
@click.argument("manifest")
@click.argument("obj", default="X")
@pass_ctx
def cmd_mcm(opts, manifest, obj):
    """Maximal Cohen-Macaulay check: uExt^q(M, A) = 0 for q in 1..hbound."""

    def body(ctx, report):
        mod = ctx.module_for(obj)
        ok, offending = mcm_check(mod, min(ctx.manifest.hbound, 3))
        report.set("object", obj)
        report.set("mcm", ok)
        if not ok:
            report.set(
                "offending",
                {str(q): {str(d): v for d, v in nz.items()} for q, nz in offending.items()},
            )
        report.status("pass" if ok else "fail")

    _run(opts, manifest, "mcm", body)


@_cmd("iso")
@click.argument("manifest")
@click.argument("obj1")
@click.argument("obj2")
@pass_ctx
def cmd_iso(opts, manifest, obj1, obj2):
    """Exact isomorphism test between two modules."""

    def body(ctx, report):
        m1 = ctx.module_for(obj1)
        m2 = ctx.module_for(obj2)
        report.set("pair", [obj1, obj2])
        report.set("isomorphic", is_isomorphic(m1, m2))

    _run(opts, manifest, "iso", body)


@_cmd("mutate-left")
@click.argument("manifest")
@click.argument("e_obj")
@click.argument("f_obj")
@click.option("--expect", default=None, help="object to compare the mutation against")
@pass_ctx
def cmd_mutate_left(opts, manifest, e_obj, f_obj, expect):
    """Left mutation: kernel of the evaluation Hom(E,F)_0 (x) E -> F."""

    def body(ctx, report):
        pipe = ctx.pipeline()
        try:
            result = left_mutation(pipe, ObjectHandle.parse(e_obj), ObjectHandle.parse(f_obj))
        except MutationError as exc:
            report.set("error", str(exc))
            report.status("fail")
            return
        report.set("pair", [e_obj, f_obj])
        report.set("dims", {str(d): result.dim(d) for d in range(result.lo, min(result.hi, 6) + 1)})
        report.set("generator_degrees", sorted(d for d, _ in result.generators()))
        if expect:
            report.set("expect", expect)
            report.set(
                "isomorphic_to_expect",
                is_isomorphic(result, pipe.module_of(ObjectHandle.parse(expect))),
            )

    _run(opts, manifest, "mutate-left", body)


@_cmd("mutate-right")
@click.argument("manifest")
@click.argument("f_obj")
@click.argument("e_obj")
@click.option("--expect", default=None)
@pass_ctx
def cmd_mutate_right(opts, manifest, f_obj, e_obj, expect):
    """Right mutation: cokernel of the coevaluation E -> DHom(E,F)_0 (x) F."""

    def body(ctx, report):
        pipe = ctx.pipeline()
        try:
            result = right_mutation(pipe, ObjectHandle.parse(f_obj), ObjectHandle.parse(e_obj))
        except MutationError as exc:
            report.set("error", str(exc))
            report.status("fail")
            return
        report.set("pair", [f_obj, e_obj])
        report.set("dims", {str(d): result.dim(d) for d in range(result.lo, min(result.hi, 6) + 1)})
        if expect:
            report.set("expect", expect)
            report.set(
                "isomorphic_to_expect",
                is_isomorphic(result, pipe.module_of(ObjectHandle.parse(expect))),
            )

    _run(opts, manifest, "mutate-right", body)


@_cmd("exceptional")
@click.argument("manifest")
@click.argument("objects", nargs=-1)
@pass_ctx
def cmd_exceptional(opts, manifest, objects):
    """Relative exceptional sequence check (RE1)(RE2)(RE3)."""

    def body(ctx, report):
        pipe = ctx.pipeline()
        seq = [ObjectHandle.parse(o) for o in objects] if objects else [
            ObjectHandle.parse(o) for o in ("A(-1)", "X(-1)", "A", "X")
        ]
        rep = check_relative_exceptional(pipe, seq)
        report.set("sequence", rep["sequence"])
        report.set("conditions", rep["conditions"])
        report.set("failures", rep["failures"])
        report.set("certified_up_to_degree", pipe.D)
        report.status("pass" if rep["pass"] else "fail")

    _run(opts, manifest, "exceptional", body)


@_cmd("helix")
@click.argument("manifest")
@click.option("--blocked", is_flag=True, help="period-2 blocked variant A(j)+X(j)")
@click.option("--window", default=None, help="index window a..b (overrides manifest)")
@pass_ctx
def cmd_helix(opts, manifest, blocked, window):
    """Geometric helix window check (H1)(H2) + geometricity."""

    def body(ctx, report):
        pipe = ctx.pipeline()
        settings = ctx.manifest.pipeline_settings()
        lo, hi = _parse_window(window) if window else settings["window"]
        if blocked:
            period = settings["period"] // 2
            lo, hi = lo // 2, hi // 2

            def rule(j):
                return ObjectHandle([("A", j), ("X", j)])
        else:
            period = settings["period"]

            def rule(n):
                if n % 2 == 0:
                    return ObjectHandle([("A", n // 2)])
                return ObjectHandle([("X", (n - 1) // 2)])
        rep = check_geometric_helix(pipe, rule, period, (lo, hi))
        report.set("window", rep["window"])
        report.set("period", rep["period"])
        report.set("blocked", blocked)
        report.set("H1", rep["H1"])
        report.set("H2", rep["H2"])
        report.set("geometric", rep["geometric"])
        report.set("failures", rep["failures"])
        report.set("certified_up_to_degree", pipe.D)
        report.status("pass" if rep["pass"] else "fail")

    _run(opts, manifest, "helix", body)


@_cmd("classify-standard")
@click.argument("manifest")
@pass_ctx
def cmd_classify(opts, manifest):
    """Standard / non-standard classification of the cokernel pair."""

    def body(ctx, report):
        pipe = ctx.pipeline()
        rep = classify_standard(pipe)
        report.set("classification", rep["classification"])
        report.set("witnesses", rep["witnesses"])
        report.set("certified_up_to_degree", pipe.D)
        if rep["classification"] == "inconclusive":
            report.status("inconclusive")

    _run(opts, manifest, "classify-standard", body)


@_cmd("section-algebra")
@click.argument("manifest")
@pass_ctx
def cmd_section(opts, manifest):
    """Section algebra over (A, X) with its degree-0 block report."""

    def body(ctx, report):
        pipe = ctx.pipeline()
        bound = ctx.manifest.pipeline_settings()["section_bound"]
        B = section_algebra([("A", pipe.base("A")), ("X", pipe.base("X"))], bound)
        report.set("series", B.dims)
        report.set("degree0_blocks", B.meta["degree0_blocks"])
        report.set("degree0_dimension", B.dims[0])
        report.set("bound", bound)

    _run(opts, manifest, "section-algebra", body)


@_cmd("regularity")
@click.argument("manifest")
@pass_ctx
def cmd_regularity(opts, manifest):
    """Truncated AS-regularity evidence over the degree-0 part."""

    def body(ctx, report):
        if "pipeline" in ctx.manifest.data:
            pipe = ctx.pipeline()
            bound = ctx.manifest.pipeline_settings()["section_bound"]
            tab = section_algebra([("A", pipe.base("A")), ("X", pipe.base("X"))], bound)
            label = "section algebra over (A, X)"
        else:
            tab, label = ctx.manifest.target_algebra()
        rep = regularity_evidence(tab, ctx.manifest.hbound)
        report.set("algebra", label)
        report.set("evidence", rep["evidence"])
        if rep["evidence"]:
            report.set("dimension", rep["d"])
            report.set("gorenstein_parameter", rep["ell"])
        report.set("failures", rep["failures"])
        report.set("bimodule_identification", rep["bimodule_identification"])
        report.set(
            "sides",
            {
                side: {
                    "betti": [{str(k): v for k, v in row.items()} for row in s["betti"]],
                    "resolution_completed": s["resolution_completed"],
                    "ext_nonzero": {
                        str(q): {str(d): v for d, v in info["nonzero"].items()}
                        for q, info in s["ext"].items()
                    },
                }
                for side, s in rep["sides"].items()
            },
        )
        report.status("pass" if rep["evidence"] else "fail")

    _run(opts, manifest, "regularity", body)


if __name__ == "__main__":
    main()
