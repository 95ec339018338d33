"""End-to-end checks against a real server process."""

import json
import socket
import subprocess
import sys
import threading
import time

import httpx
import pytest

from finch.cli import main as cli_main


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@pytest.fixture
def server(tmp_path):
    code = cli_main(
        ["synth", "--function", "product", "--n", "2000", "--seed", "4",
         "--levels", "11", "--quantize", "x", "--out", str(tmp_path / "demo.csv")]
    )
    assert code == 0
    port = free_port()
    proc = subprocess.Popen(
        [sys.executable, "-m", "finch.cli", "serve", "--data-dir", str(tmp_path), "--port", str(port)],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
    )
    base = f"http://127.0.0.1:{port}"
    try:
        deadline = time.time() + 20
        while True:
            try:
                r = httpx.get(base + "/", timeout=1.0)
                if r.status_code == 200:
                    break
            except httpx.HTTPError:
                pass
            if time.time() > deadline:
                proc.terminate()
                out, err = proc.communicate(timeout=5)
                raise RuntimeError(f"server did not start: {err.decode()[:2000]}")
            time.sleep(0.1)
        yield base
    finally:
        proc.terminate()
        proc.wait(timeout=10)


def test_serve_smoke_and_preload(server):
    doc = httpx.get(server + "/").json()
    assert doc["datasets"] == ["demo"]

    sid = httpx.post(
        server + "/sessions",
        json={"dataset_id": "demo", "target": {"mode": "regression"},
              "instance": {"values": {"x": 0.5, "z": 0.9}}},
    ).json()["session_id"]
    r = httpx.post(
        server + f"/sessions/{sid}/commands",
        json={"command": "set_x_feature", "args": {"feature": "x"}},
    )
    assert r.status_code == 200
    payload = httpx.get(server + f"/sessions/{sid}/payload")
    assert payload.status_code == 200
    assert set(payload.json()["curves"]) == {"base"}

    missing = httpx.get(server + "/sessions/does-not-exist/payload")
    assert missing.status_code == 404
    assert missing.json()["code"] == "session_not_found"


def test_serve_upload_roundtrip(server):
    csv = "f,prediction\n1,2.0\n2,4.0\n3,6.0\n"
    up = httpx.post(
        server + "/datasets",
        files={"table": ("mini.csv", csv.encode(), "text/csv")},
        data={"schema": json.dumps({"prediction": "prediction"})},
    )
    assert up.status_code == 200
    dataset_id = up.json()["dataset_id"]
    sid = httpx.post(
        server + "/sessions",
        json={"dataset_id": dataset_id, "target": {"mode": "regression"}, "instance": {"row": 0}},
    ).json()["session_id"]
    httpx.post(
        server + f"/sessions/{sid}/commands",
        json={"command": "set_x_feature", "args": {"feature": "f"}},
    )
    doc = httpx.get(server + f"/sessions/{sid}/payload").json()
    assert doc["mean_line"] == 4.0


def test_concurrent_reads_see_consistent_states(server):
    """Readers racing a mutating writer always get fully-old or fully-new
    payloads: curve roles, diagnostics, and chain length stay coherent."""
    sid = httpx.post(
        server + "/sessions",
        json={"dataset_id": "demo", "target": {"mode": "regression"},
              "instance": {"values": {"x": 0.5, "z": 0.9}}},
    ).json()["session_id"]
    httpx.post(
        server + f"/sessions/{sid}/commands",
        json={"command": "set_x_feature", "args": {"feature": "x"}},
    )

    stop = threading.Event()
    problems: list[str] = []

    def writer():
        with httpx.Client(timeout=10.0) as client:
            for _ in range(30):
                client.post(
                    server + f"/sessions/{sid}/commands",
                    json={"command": "add_feature", "args": {"feature": "z"}},
                )
                client.post(server + f"/sessions/{sid}/commands", json={"command": "remove_last"})
        stop.set()

    def reader():
        with httpx.Client(timeout=10.0) as client:
            while not stop.is_set():
                doc = client.get(server + f"/sessions/{sid}/payload").json()
                depth = len(doc["chain"]["conditioning_features"])
                roles = set(doc["curves"])
                expected = {"base"} if depth == 0 else {"base", "current"}
                if roles != expected:
                    problems.append(f"depth {depth} with curves {sorted(roles)}")
                if len(doc["subset_diagnostics"]) != depth + 1:
                    problems.append(
                        f"depth {depth} with {len(doc['subset_diagnostics'])} diagnostics"
                    )

    threads = [threading.Thread(target=writer)] + [threading.Thread(target=reader) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join(timeout=120)
    assert problems == []
