"""Number-field invariants from the LMFDB, a local cache and bundled fixtures.

Lookup order for :func:`fetch_profile` is cache, bundled fixture, then the
network (unless offline mode is on).  Profiles are cached as one JSON file
per label; writes go through a temporary file and an atomic rename.

Environment:

* ``TAMERAY_CACHE_DIR``: cache directory (default ``~/.cache/tameray``)
* ``TAMERAY_OFFLINE``: any non-empty value other than ``0`` disables the network
* ``TAMERAY_LMFDB_URL``: API base URL
"""

from fractions import Fraction
from importlib import resources
import json
import logging
import os
import pathlib
import re
import tempfile
import urllib.error
import urllib.parse
import urllib.request

from . import polys
from .extfield import NumberFieldProfile
from .polys import PolyZ

__all__ = [
    "DataError",
    "FixtureMiss",
    "MalformedResponse",
    "SchemaError",
    "fetch_profile",
    "load_fixture",
    "bundled_fixture",
    "validate_profile",
    "profile_from_record",
    "profile_to_record",
    "cache_dir",
    "offline",
]

log = logging.getLogger(__name__)

DEFAULT_URL = "https://www.lmfdb.org/api/nf_fields/"
SCHEMA_VERSION = 1
_LABEL = re.compile(r"^(\d+)\.(\d+)\.(\d+)\.(\d+)$")


class DataError(Exception):
    """Base class for data and fixture problems."""


class FixtureMiss(DataError):
    """No cache entry, no fixture, and the network is unavailable or disabled."""


class MalformedResponse(DataError):
    """The remote service answered with something that is not a usable profile."""


class SchemaError(DataError):
    """A fixture or cache file violates the schema; ``path`` names the field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


def cache_dir():
    d = os.environ.get("TAMERAY_CACHE_DIR")
    return pathlib.Path(d) if d else pathlib.Path.home() / ".cache" / "tameray"


def offline():
    v = os.environ.get("TAMERAY_OFFLINE", "")
    return v not in ("", "0")


# ---------------------------------------------------------------------------
# records


def _frac_pairs(vec, path):
    out = []
    for i, pair in enumerate(vec):
        try:
            num, den = pair
            out.append(Fraction(int(num), int(den)))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"{path}[{i}]", f"expected [num, den], got {pair!r}") from exc
    return out


def profile_from_record(label, rec, provenance=None):
    """Build a profile from one fixture-schema record."""
    base = f"fields.{label}"
    for key in ("poly", "r1", "r2", "class_number"):
        if key not in rec:
            raise SchemaError(f"{base}.{key}", "missing")
    try:
        poly = PolyZ(int(c) for c in rec["poly"])
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{base}.poly", str(exc)) from exc
    units = rec.get("fundamental_units")
    if units is not None:
        units = [_frac_pairs(u, f"{base}.fundamental_units[{i}]") for i, u in enumerate(units)]
    tg = rec.get("torsion_generator")
    if tg is not None:
        tg = _frac_pairs(tg, f"{base}.torsion_generator")
    fd = rec.get("field_discriminant")
    try:
        return NumberFieldProfile(
            label=label,
            defining=poly,
            r1=int(rec["r1"]),
            r2=int(rec["r2"]),
            class_number=int(rec["class_number"]),
            class_group=tuple(int(c) for c in rec.get("class_group", ())),
            torsion_order=int(rec.get("torsion_order", 2)),
            torsion_generator=tg,
            fundamental_units=units,
            field_discriminant=int(fd) if fd is not None else None,
            name=rec.get("name", ""),
            provenance=provenance or rec.get("provenance", ""),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(base, str(exc)) from exc


def _pairs(vec):
    return [[str(c.numerator), str(c.denominator)] for c in vec]


def profile_to_record(F):
    rec = {
        "poly": list(F.defining.coeffs),
        "r1": F.r1,
        "r2": F.r2,
        "class_number": str(F.class_number),
        "class_group": list(F.class_group),
        "torsion_order": F.torsion_order,
    }
    if F.torsion_generator is not None:
        rec["torsion_generator"] = _pairs(F.torsion_generator)
    if F.fundamental_units is not None:
        rec["fundamental_units"] = [_pairs(u) for u in F.fundamental_units]
    if F.field_discriminant is not None:
        rec["field_discriminant"] = str(F.field_discriminant)
    if F.name:
        rec["name"] = F.name
    return rec


def load_fixture(path):
    """Parse a fixture file into {label: profile}; raises SchemaError."""
    try:
        data = json.loads(pathlib.Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(str(path), f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("$", "top level must be an object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError("schema_version", f"expected {SCHEMA_VERSION}, got {data.get('schema_version')!r}")
    fields = data.get("fields")
    if not isinstance(fields, dict):
        raise SchemaError("fields", "must be an object keyed by label")
    return {label: profile_from_record(label, rec, f"fixture ({rec.get('provenance', '')})")
            for label, rec in fields.items()}


_BUNDLED = None


def bundled_fixture():
    global _BUNDLED
    if _BUNDLED is None:
        ref = resources.files("tameray") / "data" / "fixtures.json"
        with resources.as_file(ref) as p:
            _BUNDLED = load_fixture(p)
    return _BUNDLED


# ---------------------------------------------------------------------------
# validation


def _poly_norm(f, coords):
    """Absolute norm of sum coords[i] theta^i, theta a root of f."""
    den = 1
    for c in coords:
        den = den * c.denominator // _gcd(den, c.denominator)
    g = polys.trim([int(c * den) for c in coords])
    if not g:
        return Fraction(0)
    f = list(f.coeffs)
    n = len(f) - 1
    r = polys.resultant(f, g)
    return Fraction(r) / Fraction(f[-1]) ** (len(g) - 1) / Fraction(den) ** n


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def validate_profile(F):
    """List of invariant violations (empty when the profile is consistent)."""
    out = []
    n = F.degree
    if F.r1 + 2 * F.r2 != n:
        out.append(f"degree {n} != r1 + 2*r2 = {F.r1 + 2 * F.r2}")
    m = _LABEL.match(F.label or "")
    if m:
        deg, r1, absd, _ = (int(x) for x in m.groups())
        if deg != n:
            out.append(f"label degree {deg} != polynomial degree {n}")
        if r1 != F.r1:
            out.append(f"label r1 {r1} != r1 {F.r1}")
        if F.field_discriminant is not None and abs(F.field_discriminant) != absd:
            out.append(f"label |disc| {absd} != field discriminant {F.field_discriminant}")
    if F.class_group:
        prod = 1
        for c in F.class_group:
            prod *= c
        if prod != F.class_number:
            out.append(f"class group product {prod} != class number {F.class_number}")
        if any(F.class_group[i + 1] and F.class_group[i] % F.class_group[i + 1]
               for i in range(len(F.class_group) - 1)):
            out.append(f"class group {list(F.class_group)} is not a divisibility chain")
    elif F.class_number != 1:
        out.append(f"empty class group but class number {F.class_number}")
    if F.field_discriminant is not None:
        d = F.defining.discriminant()
        if d % F.field_discriminant:
            out.append("field discriminant does not divide the polynomial discriminant")
        if (F.field_discriminant < 0) != (F.r2 % 2 == 1):
            out.append("sign of the discriminant disagrees with r2")
    if F.fundamental_units is not None:
        if len(F.fundamental_units) != F.unit_rank:
            out.append(f"{len(F.fundamental_units)} fundamental units but unit rank {F.unit_rank}")
        for i, u in enumerate(F.fundamental_units):
            if len(u) != n:
                out.append(f"unit {i}: {len(u)} coordinates for degree {n}")
                continue
            N = _poly_norm(F.defining, u)
            if abs(N) != 1:
                out.append(f"unit {i}: norm {N}, not a unit")
    if F.torsion_generator is not None:
        N = _poly_norm(F.defining, F.torsion_generator)
        if abs(N) != 1:
            out.append(f"torsion generator: norm {N}, not a unit")
    return out


# ---------------------------------------------------------------------------
# fetching


def _cache_path(label):
    safe = re.sub(r"[^0-9A-Za-z._-]", "_", label)
    return cache_dir() / f"{safe}.json"


def _write_atomic(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _serialize(label, F, source):
    rec = profile_to_record(F)
    rec["provenance"] = source
    return json.dumps({"schema_version": SCHEMA_VERSION, "fields": {label: rec}}, indent=1, sort_keys=True) + "\n"


def _read_cache(label):
    p = _cache_path(label)
    if not p.exists():
        return None
    prof = load_fixture(p)
    if label not in prof:
        raise SchemaError(str(p), f"cache file does not contain {label}")
    F = prof[label]
    F.provenance = "cache"
    return F


def _lookup_poly(poly):
    target = PolyZ(polys.trim(list(poly.coeffs)))
    for label, F in bundled_fixture().items():
        if F.defining == target:
            return label
    return None


def fetch_profile(label_or_poly, *, use_cache=True, base_url=None, timeout=20.0, retries=2):
    """Profile for an LMFDB label (or a polynomial matching a bundled fixture).

    ``provenance`` on the result is ``cache``, ``fixture`` or ``network``.
    """
    if isinstance(label_or_poly, PolyZ) or (isinstance(label_or_poly, str) and "x" in label_or_poly):
        poly = label_or_poly if isinstance(label_or_poly, PolyZ) else polys.parse_poly(label_or_poly)
        label = _lookup_poly(poly)
        if label is None:
            raise FixtureMiss(f"no bundled field with defining polynomial {poly}")
    else:
        label = str(label_or_poly)
        if not _LABEL.match(label):
            raise ValueError(f"not a number field label: {label!r}")
    if use_cache:
        F = _read_cache(label)
        if F is not None:
            return F
    fix = bundled_fixture()
    if label in fix:
        F = fix[label]
        F = NumberFieldProfile(**{**F.__dict__, "provenance": "fixture"})
        source = "fixture"
    else:
        if offline():
            raise FixtureMiss(f"{label}: not cached, not bundled, and offline mode is on")
        F = _fetch_network(label, base_url or os.environ.get("TAMERAY_LMFDB_URL", DEFAULT_URL), timeout, retries)
        source = "network"
    if use_cache:
        try:
            _write_atomic(_cache_path(label), _serialize(label, F, source))
        except OSError as exc:
            log.warning("could not write cache for %s: %s", label, exc)
    return F


def _fetch_network(label, base_url, timeout, retries):
    q = urllib.parse.urlencode({"label": label, "_format": "json"})
    url = f"{base_url}?{q}"
    last = None
    for attempt in range(retries + 1):
        try:
            with urllib.request.urlopen(url, timeout=timeout) as resp:
                body = resp.read()
            break
        except (urllib.error.URLError, OSError) as exc:
            last = exc
            log.info("fetch %s failed (attempt %d): %s", label, attempt + 1, exc)
    else:
        raise FixtureMiss(f"{label}: network unavailable ({last})")
    try:
        data = json.loads(body)
        rec = data["data"][0]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise MalformedResponse(f"{label}: unexpected response shape") from exc
    return _from_lmfdb(label, rec)


_A = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(a(?:\^(\d+))?)?")


def _parse_in_a(text, n):
    """Power-basis coordinates of a polynomial in ``a`` with rational coefficients."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty element")
    coords = [Fraction(0)] * n
    pos = 0
    while pos < len(s):
        m = _A.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r}")
        sign, c, mon, e = m.groups()
        if c is None and mon is None:
            raise ValueError(f"cannot parse {text!r}")
        coef = Fraction(c) if c else Fraction(1)
        if sign == "-":
            coef = -coef
        k = int(e) if e else (1 if mon else 0)
        if k >= n:
            raise ValueError(f"exponent {k} out of range in {text!r}")
        coords[k] += coef
        pos = m.end()
    return coords


def _from_lmfdb(label, rec):
    try:
        coeffs = [int(c) for c in rec["coeffs"]]
        n = len(coeffs) - 1
        r2 = int(rec["r2"])
        cg = [int(c) for c in rec.get("class_group", [])]
        h = int(rec["class_number"])
        units = [_parse_in_a(u, n) for u in rec.get("units", [])] if "units" in rec else None
        tg = _parse_in_a(rec["torsion_gen"], n) if rec.get("torsion_gen") else None
        disc = int(rec["disc_sign"]) * int(rec["disc_abs"]) if "disc_abs" in rec else None
        return NumberFieldProfile(
            label=label,
            defining=PolyZ(coeffs),
            r1=n - 2 * r2,
            r2=r2,
            class_number=h,
            class_group=tuple(cg),
            torsion_order=int(rec.get("torsion_order", 2)),
            torsion_generator=tg,
            fundamental_units=units,
            field_discriminant=disc,
            provenance="network",
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedResponse(f"{label}: {exc}") from exc
