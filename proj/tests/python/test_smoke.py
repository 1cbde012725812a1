import json
from pathlib import Path

import pytest

import svcengine

ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="module")
def server():
    s = svcengine.FixtureServer()
    s.start(0)
    yield s
    s.stop()


def load(name):
    return json.loads((ROOT / "scenarios" / name).read_text())


def test_klm_table1():
    assert svcengine.klm_estimate(load("table1_baseline.json"))["total"] == pytest.approx(46.6)
    assert svcengine.klm_estimate(load("table1_with_ss.json"))["total"] == pytest.approx(18.0)
    assert svcengine.klm_estimate(load("define_service.json"))["total"] == pytest.approx(39.2)
    cmp = svcengine.klm_compare(load("table1_baseline.json"), load("table1_with_ss.json"))
    assert cmp["delta"] == pytest.approx(28.6)


def test_spec_round_trip_and_validation():
    spec = svcengine.fixture_spec("form_reload", "http://127.0.0.1:8765", with_strategy=True)
    text = svcengine.canonicalize(spec)
    assert svcengine.canonicalize(text) == text
    assert svcengine.validate(spec)["ok"] is True
    del spec["result_spec"]["target_url"]
    assert svcengine.validate(spec)["ok"] is False


def test_bad_spec_raises():
    with pytest.raises(svcengine.SvcError) as info:
        svcengine.canonicalize("{}")
    assert info.value.code == "parse-error"


def test_bundle_import():
    spec = svcengine.fixture_spec("form_reload", "http://127.0.0.1:8765", with_strategy=True)
    result = svcengine.import_bundle(svcengine.export_bundle([spec]))
    assert result["imported"] == [spec["id"]]


def test_search_matches_ground_truth(server):
    spec = svcengine.fixture_spec("form_reload", server.base_url, with_strategy=True)
    rs = svcengine.search(spec, "borges")
    urls = [i["target_url"] for i in rs["items"]]
    assert urls == svcengine.ground_truth_urls(server.base_url, "borges")
    assert len(urls) == 4


def test_detect_and_render(server):
    draft = svcengine.fixture_spec("ajax_fragment", server.base_url)
    strategy = svcengine.detect_strategy(draft, "borges", "cortázar")
    assert strategy["variant"] == "write_and_click_for_ajax_call"
    draft["strategy"] = strategy
    model = svcengine.render(draft, "borges", "aggregate_count", {"property": "venue"})
    assert model["kind"] == "aggregate"
    assert sum(c["count"] for c in model["counts"]) == 4


def test_json_api(server):
    rs = svcengine.search(svcengine.fixture_json_spec(server.base_url), "cortázar")
    assert len(rs["items"]) == len(svcengine.ground_truth_urls(server.base_url, "cortázar"))
