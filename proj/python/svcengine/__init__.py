"""Python access to the search service engine.

Specs, queries and results are plain dicts; they travel to the C++ core as
JSON text.
"""

import json

from . import _core
from ._core import FORMAT_VERSION, FixtureServer, SvcError

__all__ = [
    "FORMAT_VERSION",
    "FixtureServer",
    "SvcError",
    "canonicalize",
    "detect_strategy",
    "export_bundle",
    "fixture_json_spec",
    "fixture_spec",
    "ground_truth_urls",
    "import_bundle",
    "klm_compare",
    "klm_estimate",
    "render",
    "search",
    "validate",
]


def _text(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def canonicalize(spec):
    return _core.canonicalize(_text(spec))


def validate(spec):
    return json.loads(_core.validate(_text(spec)))


def export_bundle(specs):
    return _core.export_bundle([_text(s) for s in specs])


def import_bundle(text):
    return json.loads(_core.import_bundle(text))


def search(spec, keywords, filters=(), ordering=None, page=1, enrich=False):
    request = {"keywords": keywords, "filters": list(filters), "page": page, "enrich": enrich}
    if ordering is not None:
        request["ordering"] = ordering
    return json.loads(_core.search(_text(spec), json.dumps(request)))


def render(spec, keywords, visualizer_id="", options=None, **search_args):
    search_req = {"keywords": keywords}
    search_req.update(search_args)
    request = {"search": search_req, "visualizer_id": visualizer_id, "options": options or {}}
    return json.loads(_core.render(_text(spec), json.dumps(request)))


def detect_strategy(spec, probe_a, probe_b):
    return json.loads(_core.detect_strategy(_text(spec), probe_a, probe_b))


def klm_estimate(scenario):
    return json.loads(_core.klm_estimate(_text(scenario)))


def klm_compare(a, b):
    return json.loads(_core.klm_compare(_text(a), _text(b)))


def fixture_spec(mode, base_url, with_strategy=False):
    return json.loads(_core.fixture_spec(mode, base_url, with_strategy))


def fixture_json_spec(base_url):
    return json.loads(_core.fixture_json_spec(base_url))


def ground_truth_urls(base_url, keywords):
    return list(_core.ground_truth_urls(base_url, keywords))
