"""Declarative manifests: one file describes one mathematical setup.

Manifests are TOML; the full grammar is documented in docs/manifest.md.
Unknown keys are rejected and every polynomial string must parse in the
declared generator set.  Bundled example manifests live in the package's
manifests/ directory and can be referenced by bare name.
"""

import hashlib
from importlib import resources
from pathlib import Path

import tomli

from .algebra import PresentedAlgebra, quasi_veronese, quotient_by_central, veronese
from .field import QQ, field_from_spec
from .freealg import GeneratorSet, parse_poly


class ManifestError(Exception):
    """Invalid manifest content."""


_TOP_KEYS = {
    "truncation", "hbound", "field", "algebra", "central", "automorphism",
    "module", "matrix_factorization", "pipeline", "target",
}
_ALGEBRA_KEYS = {"name", "generators", "degrees", "relations"}
_MODULE_KEYS = {"name", "row_shifts", "col_shifts", "matrix"}
_MF_KEYS = {"P", "Q", "split"}
_PIPELINE_KEYS = {"nu", "window", "period", "section_bound"}
_TARGET_KEYS = {"construction", "r"}


def _check_keys(table, allowed, where):
    extra = set(table) - allowed
    if extra:
        raise ManifestError("unknown keys %s in [%s]" % (sorted(extra), where))


class Manifest:
    """Validated manifest plus lazy builders for the declared objects."""

    def __init__(self, data, name, digest):
        self.name = name
        self.digest = digest
        _check_keys(data, _TOP_KEYS, "manifest")
        self.truncation = int(data.get("truncation", 10))
        self.hbound = int(data.get("hbound", 4))
        fieldspec = data.get("field", {})
        if fieldspec:
            _check_keys(fieldspec, {"kind", "prime"}, "field")
            kind = fieldspec.get("kind", "Q")
            if kind.lower() in ("q", "rationals"):
                self.field = QQ
            elif kind == "p":
                self.field = field_from_spec("p:%d" % int(fieldspec["prime"]))
            else:
                self.field = field_from_spec(kind)
        else:
            self.field = QQ

        if "algebra" not in data:
            raise ManifestError("manifest needs an [algebra] section")
        alg = data["algebra"]
        _check_keys(alg, _ALGEBRA_KEYS, "algebra")
        try:
            self.gens = GeneratorSet(alg["generators"], alg.get("degrees"))
        except (KeyError, ValueError) as exc:
            raise ManifestError("bad [algebra] generators: %s" % exc) from exc
        self.algebra_name = alg.get("name", "A")
        self.relation_strings = list(alg.get("relations", []))
        self.data = data
        self._ambient = None
        self._validate_rest()

    def _poly(self, s, where):
        try:
            p = parse_poly(s, self.gens, self.field)
        except (ValueError, KeyError) as exc:
            raise ManifestError("bad polynomial %r in %s: %s" % (s, where, exc)) from exc
        if not p.is_homogeneous():
            raise ManifestError("polynomial %r in %s is inhomogeneous" % (s, where))
        return p

    def _validate_rest(self):
        d = self.data
        for r in self.relation_strings:
            self._poly(r, "algebra.relations")
        if "central" in d:
            _check_keys(d["central"], {"element"}, "central")
            self._poly(d["central"]["element"], "central")
        if "automorphism" in d:
            _check_keys(d["automorphism"], {"images"}, "automorphism")
            for g, img in d["automorphism"]["images"].items():
                if g not in self.gens.names:
                    raise ManifestError("automorphism image for unknown generator %r" % g)
                self._poly(img, "automorphism")
        if "module" in d:
            _check_keys(d["module"], _MODULE_KEYS, "module")
            mod = d["module"]
            rows, cols = mod["row_shifts"], mod["col_shifts"]
            mat = mod["matrix"]
            if len(mat) != len(rows) or any(len(r) != len(cols) for r in mat):
                raise ManifestError("[module] matrix shape does not match shifts")
            for row in mat:
                for ent in row:
                    if ent.strip() != "0":
                        self._poly(ent, "module.matrix")
        if "matrix_factorization" in d:
            _check_keys(d["matrix_factorization"], _MF_KEYS, "matrix_factorization")
            if "central" not in d:
                raise ManifestError("[matrix_factorization] needs a [central] element")
            for key in ("P", "Q"):
                for row in d["matrix_factorization"][key]:
                    for ent in row:
                        self._poly(ent, "matrix_factorization.%s" % key)
        if "pipeline" in d:
            pipe = d["pipeline"]
            _check_keys(pipe, {"quadric"}, "pipeline")
            _check_keys(pipe["quadric"], _PIPELINE_KEYS, "pipeline.quadric")
            if "matrix_factorization" not in d:
                raise ManifestError("[pipeline.quadric] needs [matrix_factorization]")
            nu = pipe["quadric"].get("nu", "identity")
            if not (nu in ("identity", "none") or isinstance(nu, dict)):
                raise ManifestError("pipeline nu must be 'identity', 'none', or images")
        if "target" in d:
            _check_keys(d["target"], _TARGET_KEYS, "target")
            cons = d["target"].get("construction")
            if cons not in ("veronese", "quasi_veronese"):
                raise ManifestError("unknown target construction %r" % cons)

    # builders

    def ambient(self):
        """The declared [algebra] as a presented algebra."""
        if self._ambient is None:
            rels = [self._poly(r, "algebra.relations") for r in self.relation_strings]
            self._ambient = PresentedAlgebra(self.gens, rels, self.truncation, self.field)
        return self._ambient

    def central_poly(self):
        if "central" not in self.data:
            return None
        return self._poly(self.data["central"]["element"], "central")

    def main_algebra(self):
        """The algebra a command acts on: the quotient by the central element
        when one is declared, else the ambient algebra."""
        f = self.central_poly()
        if f is None:
            return self.ambient(), self.algebra_name
        return quotient_by_central(self.ambient(), f), self.algebra_name + "/(f)"

    def target_algebra(self):
        """main_algebra with the optional [target] construction applied;
        returns (tabulated algebra, label)."""
        main, label = self.main_algebra()
        tab = main.tabulate()
        tgt = self.data.get("target")
        if tgt:
            r = int(tgt.get("r", 1))
            if tgt["construction"] == "veronese":
                return veronese(tab, r), "%s^(%d)" % (label, r)
            return quasi_veronese(tab, r), "%s^[%d]" % (label, r)
        return tab, label

    def automorphism_images(self):
        if "automorphism" not in self.data:
            return None
        return dict(self.data["automorphism"]["images"])

    def mf_matrices(self):
        if "matrix_factorization" not in self.data:
            return None
        mf = self.data["matrix_factorization"]
        return mf["P"], mf["Q"], bool(mf.get("split", False))

    def pipeline_settings(self):
        pipe = self.data.get("pipeline", {}).get("quadric")
        if pipe is None:
            return None
        return {
            "nu": pipe.get("nu", "identity"),
            "window": tuple(pipe.get("window", (-4, 8))),
            "period": int(pipe.get("period", 4)),
            "section_bound": int(pipe.get("section_bound", 6)),
        }

    def build_pipeline(self):
        from .algebra import check_automorphism
        from .helix import QuadricPipeline

        settings = self.pipeline_settings()
        if settings is None:
            raise ManifestError("manifest has no [pipeline.quadric] section")
        P, Q, split = self.mf_matrices()
        f = self.data["central"]["element"]
        nu = settings["nu"]
        if isinstance(nu, dict):
            ok, maps, fails = check_automorphism(self.ambient(), nu)
            if not ok:
                raise ManifestError("pipeline nu is not an automorphism: %s" % fails)
            nu = maps
        return QuadricPipeline(self.ambient(), f, P, Q, nu=nu, split=split)

    def module(self):
        """The standalone [module] over the main algebra, if declared."""
        from .gradedmod import CokerModule

        mod = self.data.get("module")
        if mod is None:
            return None
        main, _ = self.main_algebra()
        tab = main.tabulate()
        entries = []
        for row in mod["matrix"]:
            out = []
            for ent in row:
                if ent.strip() == "0":
                    out.append(None)
                else:
                    d, coords = main.element_coords(self._poly(ent, "module.matrix"))
                    out.append(None if d is None else (d, coords))
            entries.append(out)
        return CokerModule(
            tab, mod["row_shifts"], mod["col_shifts"], entries,
            name=mod.get("name", "M"),
        )


def bundled_names():
    pkg = resources.files("ncgrade") / "manifests"
    return sorted(p.name[:-5] for p in pkg.iterdir() if p.name.endswith(".toml"))


def load_manifest(ref):
    """Load a manifest from a path or a bundled name."""
    path = Path(ref)
    if path.suffix == ".toml" and path.exists():
        raw = path.read_bytes()
        name = path.stem
    else:
        pkg = resources.files("ncgrade") / "manifests" / (str(ref) + ".toml")
        try:
            raw = pkg.read_bytes()
        except (FileNotFoundError, ModuleNotFoundError):
            raise ManifestError(
                "no manifest %r (not a file, not one of: %s)"
                % (ref, ", ".join(bundled_names()))
            ) from None
        name = str(ref)
    digest = hashlib.sha256(raw).hexdigest()
    try:
        data = tomli.loads(raw.decode("utf-8"))
    except tomli.TOMLDecodeError as exc:
        raise ManifestError("TOML parse error: %s" % exc) from exc
    return Manifest(data, name, digest)
