"""HTTP endpoints against a live threaded server."""

import json
import threading
import urllib.error
import urllib.request
from importlib import resources

import pytest

from captchalab.harness import TrialStore, make_server
from captchalab.imgcore import pgm_decode


@pytest.fixture()
def server(tmp_path):
    store = TrialStore(tmp_path / "trials.jsonl")
    srv = make_server(store, port=0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()


def base(srv):
    host, port = srv.server_address
    return f"http://{host}:{port}"


def request(method, url, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(url, data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, resp.read(), dict(resp.headers)
    except urllib.error.HTTPError as exc:
        return exc.code, exc.read(), dict(exc.headers)


def jrequest(method, url, body=None):
    status, raw, _ = request(method, url, body)
    return status, json.loads(raw)


def test_create_trials(server):
    status, body = jrequest("POST", base(server) + "/api/trials",
                            {"count": 3, "base_seed": 10})
    assert status == 201
    assert len(body["trial_ids"]) == 3


def test_open_listing_and_answer_flow(server):
    _, created = jrequest("POST", base(server) + "/api/trials",
                          {"count": 1, "base_seed": 77})
    tid = created["trial_ids"][0]

    status, listing = jrequest("GET", base(server) + "/api/trials/open?role=human")
    assert status == 200 and listing["trial_ids"] == [tid]

    truth = server.store.get_trial(tid).truth
    status, body = jrequest("POST", f"{base(server)}/api/trials/{tid}/answers",
                            {"client_id": "h1", "role": "human", "text": truth})
    assert status == 200 and body == {"accepted": True}

    _, listing = jrequest("GET", base(server) + "/api/trials/open?role=human")
    assert listing["trial_ids"] == []


def test_duplicate_answer_409(server):
    _, created = jrequest("POST", base(server) + "/api/trials",
                          {"count": 1, "base_seed": 5})
    tid = created["trial_ids"][0]
    url = f"{base(server)}/api/trials/{tid}/answers"
    assert jrequest("POST", url, {"client_id": "c", "role": "human", "text": "AAAA"})[0] == 200
    assert jrequest("POST", url, {"client_id": "c", "role": "human", "text": "AAAA"})[0] == 409


def test_unknown_trial_404(server):
    status, _ = jrequest("POST", f"{base(server)}/api/trials/t99999/answers",
                         {"client_id": "c", "role": "human", "text": "AAAA"})
    assert status == 404
    assert jrequest("GET", f"{base(server)}/api/trials/t99999")[0] == 404


def test_bad_role_400(server):
    _, created = jrequest("POST", base(server) + "/api/trials",
                          {"count": 1, "base_seed": 5})
    tid = created["trial_ids"][0]
    status, _ = jrequest("POST", f"{base(server)}/api/trials/{tid}/answers",
                         {"client_id": "c", "role": "robot", "text": "AAAA"})
    assert status == 400
    assert jrequest("GET", base(server) + "/api/trials/open?role=alien")[0] == 400


def test_image_endpoint_serves_pgm(server):
    _, created = jrequest("POST", base(server) + "/api/trials",
                          {"count": 1, "base_seed": 42})
    tid = created["trial_ids"][0]
    status, raw, headers = request("GET", f"{base(server)}/api/trials/{tid}/image")
    assert status == 200
    assert headers["Content-Type"] == "image/x-portable-graymap"
    img = pgm_decode(raw)
    assert (img.width, img.height) == (200, 60)


def test_trial_detail_blind_until_closed(server):
    _, created = jrequest("POST", base(server) + "/api/trials",
                          {"count": 1, "base_seed": 31})
    tid = created["trial_ids"][0]
    truth = server.store.get_trial(tid).truth

    _, detail = jrequest("GET", f"{base(server)}/api/trials/{tid}")
    assert detail["status"] == "open"
    assert truth not in json.dumps(detail)

    for client, role in (("m", "machine"), ("h", "human")):
        jrequest("POST", f"{base(server)}/api/trials/{tid}/answers",
                 {"client_id": client, "role": role, "text": truth})
    _, detail = jrequest("GET", f"{base(server)}/api/trials/{tid}")
    assert detail["status"] == "closed"
    assert detail["truth"] == truth
    assert detail["verdict"] == "indistinguishable"


def test_report_empty_then_populated(server, tmp_path):
    status, body = jrequest("GET", base(server) + "/api/report")
    assert status == 200 and body["n_trials"] == 0

    _, created = jrequest("POST", base(server) + "/api/trials",
                          {"count": 1, "base_seed": 3})
    tid = created["trial_ids"][0]
    truth = server.store.get_trial(tid).truth
    for client, role in (("m", "machine"), ("h", "human")):
        jrequest("POST", f"{base(server)}/api/trials/{tid}/answers",
                 {"client_id": client, "role": role, "text": truth})
    _, report = jrequest("GET", base(server) + "/api/report")
    assert report["n_trials"] == 1
    assert report["machine_char_rate"] == 100.0
    assert report["per_trial"][0]["verdict"] == "indistinguishable"


def test_report_on_fixture_log(tmp_path):
    data = resources.files("captchalab.data").joinpath("trials60.jsonl").read_bytes()
    path = tmp_path / "trials.jsonl"
    path.write_bytes(data)
    srv = make_server(TrialStore(path), port=0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    try:
        _, report = jrequest("GET", base(srv) + "/api/report")
        assert report["machine_char_rate"] == 89.58
        assert report["human_char_rate"] == 83.75
        assert report["machine_full_rate"] == 65.0
        assert report["human_full_rate"] == 53.33
        assert len(report["per_trial"]) == 60
    finally:
        srv.shutdown()


def test_static_ui_serving(tmp_path):
    ui = tmp_path / "ui"
    ui.mkdir()
    (ui / "index.html").write_text("<html><body>solver</body></html>")
    (ui / "app.js").write_text("console.log('hi')")
    srv = make_server(TrialStore(tmp_path / "t.jsonl"), port=0, ui_dir=str(ui))
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    try:
        status, raw, headers = request("GET", base(srv) + "/ui/")
        assert status == 200 and b"solver" in raw
        assert headers["Content-Type"].startswith("text/html")
        status, raw, headers = request("GET", base(srv) + "/ui/app.js")
        assert status == 200 and headers["Content-Type"].startswith("text/javascript")
        assert request("GET", base(srv) + "/ui/../secrets")[0] == 404
        assert request("GET", base(srv) + "/ui/missing.js")[0] == 404
    finally:
        srv.shutdown()


def test_concurrent_answers_serialize(server):
    _, created = jrequest("POST", base(server) + "/api/trials",
                          {"count": 1, "base_seed": 8})
    tid = created["trial_ids"][0]
    results = []

    def submit(client):
        status, _ = jrequest("POST", f"{base(server)}/api/trials/{tid}/answers",
                             {"client_id": client, "role": "machine", "text": "AAAA"})
        results.append(status)

    threads = [threading.Thread(target=submit, args=(f"c{i}",)) for i in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    # Exactly one machine answer can land; the rest conflict.
    assert sorted(results) == [200, 409, 409, 409, 409, 409]
