import itertools
import random

import pytest
from fastapi.testclient import TestClient

from posebooth.api.app import create_app
from posebooth.api.config import ApiConfig
from posebooth.clock import SimulatedClock
from posebooth.demo import write_demo_catalog, write_wordlists

ACCEPTANCE_RESULTS: dict[str, bool] = {}


def criterion(label):
    """Tag an acceptance test with its criterion label for the summary."""

    def _wrap(func):
        func._criterion = label
        return func

    return _wrap


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    label = getattr(getattr(item, "function", None), "_criterion", None)
    if label and rep.when == "call":
        ACCEPTANCE_RESULTS[label] = rep.passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for label, passed in ACCEPTANCE_RESULTS.items():
            terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}: {label}")


@pytest.fixture(scope="session")
def demo_assets(tmp_path_factory):
    root = tmp_path_factory.mktemp("demo-assets")
    manifest = write_demo_catalog(root / "catalog")
    words_a, words_b = write_wordlists(root / "wordlists")
    return {"manifest": manifest, "words_a": words_a, "words_b": words_b}


@pytest.fixture
def make_config(demo_assets, tmp_path):
    counter = itertools.count()

    def _make(**overrides):
        base = dict(
            webhook_secret="test-webhook-secret",
            stations={"pub-1": "public", "priv-1": "private"},
            catalog_manifest=demo_assets["manifest"],
            wordlist_a=demo_assets["words_a"],
            wordlist_b=demo_assets["words_b"],
            store_dir=tmp_path / f"store-{next(counter)}",
            base_width=64,
            base_height=64,
        )
        base.update(overrides)
        return ApiConfig(**base)

    return _make


@pytest.fixture
def make_app(make_config):
    clients = []

    def _make(config=None, clock=None, backend=None, extractor=None, code_rng=None, **overrides):
        clock = clock or SimulatedClock(1_000.0)
        cfg = config or make_config(**overrides)
        app = create_app(
            cfg,
            clock=clock,
            backend=backend,
            extractor=extractor,
            code_rng=code_rng or random.Random(cfg.seed),
        )
        client = TestClient(app)
        clients.append(client)
        return app, client, clock, cfg

    yield _make
    for client in clients:
        client.close()


@pytest.fixture
def walk_session(make_app):
    """Scripted consent->select->capture walk; returns a reusable driver."""

    def _walk(client, clock, station="pub-1", artwork=None, capture=b"\x89fake-capture-bytes"):
        client.post(f"/station/{station}/consent").raise_for_status()
        gallery = client.get(f"/station/{station}/catalog").json()
        chosen = artwork or gallery["entries"][0]["id"]
        client.post(f"/station/{station}/select", json={"artwork_id": chosen}).raise_for_status()
        client.post(f"/station/{station}/start").raise_for_status()
        clock.advance(10.0)
        assert client.get(f"/station/{station}/status").json()["phase"] == "capturing"
        response = client.post(
            f"/station/{station}/capture",
            content=capture,
            headers={"Content-Type": "application/octet-stream"},
        )
        response.raise_for_status()
        return response.json()

    return _walk
