from fractions import Fraction
import http.server
import json
import threading

import pytest

from tameray.extfield import NumberFieldProfile
from tameray.lmfdbio import (
    FixtureMiss,
    MalformedResponse,
    SchemaError,
    bundled_fixture,
    cache_dir,
    fetch_profile,
    load_fixture,
    profile_to_record,
    validate_profile,
)
from tameray.polys import PolyZ

TABLE_LABELS = [
    "3.3.961.1",
    "3.3.47089.1",
    "6.0.141911930944.3",
    "6.0.59105344.1",
    "9.9.104413920565969.1",
    "6.0.12167.1",
]


def test_bundled_fixture_is_consistent():
    fx = bundled_fixture()
    assert len(fx) >= 9
    for label in TABLE_LABELS:
        assert label in fx
    for label, F in fx.items():
        assert validate_profile(F) == [], label


def test_table_label_profile():
    F = fetch_profile("6.0.141911930944.3")
    assert F.degree == 6 and F.signature == (0, 3) and F.unit_rank == 2
    assert fetch_profile("3.3.961.1").degree == 3


def test_cache_round_trip_identical_bytes():
    F1 = fetch_profile("3.3.961.1")
    assert F1.provenance == "fixture"
    path = cache_dir() / "3.3.961.1.json"
    first = path.read_bytes()
    F2 = fetch_profile("3.3.961.1")
    assert F2.provenance == "cache"
    assert path.read_bytes() == first
    assert profile_to_record(F1) == profile_to_record(F2)


def test_lookup_by_polynomial():
    F = fetch_profile("x^3 - x^2 - 10*x + 8")
    assert F.label == "3.3.961.1"
    with pytest.raises(FixtureMiss):
        fetch_profile("x^3 - 5")


def test_unknown_label_offline():
    with pytest.raises(FixtureMiss):
        fetch_profile("4.0.999999.1")
    with pytest.raises(ValueError):
        fetch_profile("not-a-label")


def _profile(**kw):
    base = dict(
        label="2.0.4.1",
        defining=PolyZ([1, 0, 1]),
        r1=0,
        r2=1,
        class_number=1,
        class_group=(),
        torsion_order=4,
        torsion_generator=[Fraction(0), Fraction(1)],
        fundamental_units=[],
        field_discriminant=-4,
    )
    base.update(kw)
    return NumberFieldProfile(**base)


def test_validate_catches_violations():
    assert validate_profile(_profile()) == []
    bad = validate_profile(_profile(r1=2, r2=1))
    assert any("r1 + 2*r2" in v for v in bad)
    real = _profile(label="2.2.8.1", defining=PolyZ([-2, 0, 1]), r1=2, r2=0, torsion_order=2,
                    torsion_generator=None, field_discriminant=8,
                    fundamental_units=[[Fraction(0), Fraction(1)]])  # sqrt(2) has norm -2
    assert any("not a unit" in v for v in validate_profile(real))
    good = _profile(label="2.2.8.1", defining=PolyZ([-2, 0, 1]), r1=2, r2=0, torsion_order=2,
                    torsion_generator=None, field_discriminant=8,
                    fundamental_units=[[Fraction(1), Fraction(1)]])
    assert validate_profile(good) == []
    assert any("class group product" in v for v in validate_profile(_profile(class_number=2, class_group=(3,))))


def test_schema_errors_name_the_field(tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"schema_version": 2, "fields": {}}))
    with pytest.raises(SchemaError) as exc:
        load_fixture(p)
    assert exc.value.path == "schema_version"
    p.write_text(json.dumps({"schema_version": 1, "fields": {"2.0.4.1": {"poly": [1, 0, 1], "r1": 0, "r2": 1}}}))
    with pytest.raises(SchemaError) as exc:
        load_fixture(p)
    assert exc.value.path.startswith("fields.2.0.4.1")
    p.write_text("{not json")
    with pytest.raises(SchemaError):
        load_fixture(p)


class _Handler(http.server.BaseHTTPRequestHandler):
    body = b""

    def do_GET(self):  # noqa: N802
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(self.body)

    def log_message(self, *args):
        pass


@pytest.fixture
def server(monkeypatch):
    monkeypatch.setenv("TAMERAY_OFFLINE", "0")
    httpd = http.server.HTTPServer(("127.0.0.1", 0), _Handler)
    t = threading.Thread(target=httpd.serve_forever, daemon=True)
    t.start()
    yield f"http://127.0.0.1:{httpd.server_address[1]}/"
    httpd.shutdown()


def test_network_fetch_and_cache(server):
    rec = {
        "coeffs": [-2, 0, 1], "r2": 0, "class_number": 1, "class_group": [], "torsion_order": 2,
        "torsion_gen": "-1", "units": ["a + 1"], "disc_sign": 1, "disc_abs": 8,
    }
    _Handler.body = json.dumps({"data": [rec]}).encode()
    F = fetch_profile("2.2.8.1", base_url=server)
    assert F.provenance == "network" and validate_profile(F) == []
    assert F.fundamental_units == [[Fraction(1), Fraction(1)]]
    assert fetch_profile("2.2.8.1", base_url=server).provenance == "cache"


def test_network_malformed_response(server):
    _Handler.body = b'{"data": []}'
    with pytest.raises(MalformedResponse):
        fetch_profile("2.2.12.1", base_url=server)


def test_network_unreachable_is_a_fixture_miss(monkeypatch):
    monkeypatch.setenv("TAMERAY_OFFLINE", "0")
    with pytest.raises(FixtureMiss):
        fetch_profile("2.2.12.1", base_url="http://127.0.0.1:9/", timeout=0.5, retries=0)
