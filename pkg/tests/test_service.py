import io
import json
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from retroflow.service import create_app

FAST_PARAMS = {"T": 1e-4, "steps": 25, "gamma": 1e-8, "p": 3.25, "nu": 0.01,
               "eta": 0.1, "taper": 4}


@pytest.fixture
def client(tmp_path):
    app = create_app(runs_dir=tmp_path / "runs", workers=2)
    with TestClient(app) as c:
        yield c


def submit(client, params=None, dataset="blobs", n=64):
    body = {"dataset": dataset, "n": n, "params": params or FAST_PARAMS}
    resp = client.post("/api/runs", json=body)
    return resp


def wait_done(client, run_id, timeout=60.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        snap = client.get(f"/api/runs/{run_id}").json()
        if snap["status"] in ("done", "diverged", "failed"):
            return snap
        time.sleep(0.05)
    raise TimeoutError(f"run {run_id} did not finish")


class TestSubmission:
    def test_datasets_endpoint(self, client):
        names = {d["name"] for d in client.get("/api/datasets").json()}
        assert {"chart", "blobs"} <= names

    def test_valid_run_completes(self, client):
        resp = submit(client)
        assert resp.status_code == 202
        run_id = resp.json()["run_id"]
        snap = client.get(f"/api/runs/{run_id}").json()
        assert snap["status"] in ("queued", "running", "done")
        final = wait_done(client, run_id)
        assert final["status"] == "done"
        assert final["progress"]["fraction"] == pytest.approx(1.0)
        assert final["latest"]["omega"] > 0

    def test_negative_gamma_rejected_with_field_error(self, client):
        bad = dict(FAST_PARAMS, gamma=-1e-9)
        resp = submit(client, params=bad)
        assert resp.status_code == 422
        assert "gamma" in resp.json()["errors"]

    def test_unknown_dataset_not_found(self, client):
        resp = submit(client, dataset="atlantis")
        assert resp.status_code == 404

    def test_duplicate_submissions_get_distinct_ids(self, client):
        r1 = submit(client).json()["run_id"]
        r2 = submit(client).json()["run_id"]
        assert r1 != r2
        wait_done(client, r1)
        wait_done(client, r2)

    def test_multipart_upload(self, client):
        from retroflow.datasets import smooth_blobs
        from retroflow.imageio import IntensityImage
        img = smooth_blobs(64)
        pgm = b"P5\n64 64\n255\n" + img.pixels.tobytes()
        resp = client.post(
            "/api/runs",
            files={"file": ("blobs.pgm", io.BytesIO(pgm), "image/x-pgm")},
            data={"params": json.dumps(FAST_PARAMS)})
        assert resp.status_code == 202
        final = wait_done(client, resp.json()["run_id"])
        assert final["status"] == "done"

    def test_missing_dataset_and_file(self, client):
        resp = client.post("/api/runs", json={"params": FAST_PARAMS})
        assert resp.status_code == 422


class TestStatusAndArtifacts:
    def test_unknown_run_id(self, client):
        assert client.get("/api/runs/doesnotexist").status_code == 404

    def test_artifacts_of_done_run(self, client):
        run_id = submit(client).json()["run_id"]
        wait_done(client, run_id)
        for name, ctype in (("desiredT.png", "image/png"),
                            ("computed0.png", "image/png"),
                            ("evolvedT.png", "image/png"),
                            ("report.json", "application/json"),
                            ("norms.csv", "text/csv")):
            resp = client.get(f"/api/runs/{run_id}/artifacts/{name}")
            assert resp.status_code == 200, name
            assert resp.headers["content-type"].startswith(ctype)
        report = json.loads(
            client.get(f"/api/runs/{run_id}/artifacts/report.json").content)
        assert set(report["rows"]) == {"psi", "u", "v", "omega"}

    def test_artifact_not_ready_while_running(self, client):
        slow = dict(FAST_PARAMS, steps=120)
        run_id = submit(client, params=slow).json()["run_id"]
        resp = client.get(f"/api/runs/{run_id}/artifacts/evolvedT.png")
        assert resp.status_code == 409
        wait_done(client, run_id, timeout=120)

    def test_unknown_artifact_name(self, client):
        run_id = submit(client).json()["run_id"]
        wait_done(client, run_id)
        resp = client.get(f"/api/runs/{run_id}/artifacts/secret.bin")
        assert resp.status_code == 404

    def test_diverged_run_reports_step_and_partial_artifacts(self, client):
        blow = dict(FAST_PARAMS, T=0.05, steps=40, gamma=0.0)
        run_id = submit(client, params=blow).json()["run_id"]
        final = wait_done(client, run_id)
        assert final["status"] == "diverged"
        assert final["error"]["kind"] == "divergence"
        assert final["error"]["step"] > 1
        assert client.get(
            f"/api/runs/{run_id}/artifacts/desiredT.png").status_code == 200
        assert client.get(
            f"/api/runs/{run_id}/artifacts/norms.csv").status_code == 200
        assert client.get(
            f"/api/runs/{run_id}/artifacts/computed0.png").status_code == 409


class TestDeterminismAcrossConcurrency:
    def test_concurrent_runs_match_single_runs(self, client):
        p1 = dict(FAST_PARAMS)
        p2 = dict(FAST_PARAMS, gamma=3e-8)
        ids = [submit(client, params=p).json()["run_id"] for p in (p1, p2)]
        for rid in ids:
            wait_done(client, rid)
        concurrent = [client.get(f"/api/runs/{rid}/artifacts/report.json").content
                      for rid in ids]
        sequential = []
        for p in (p1, p2):
            rid = submit(client, params=p).json()["run_id"]
            wait_done(client, rid)
            sequential.append(
                client.get(f"/api/runs/{rid}/artifacts/report.json").content)
        assert concurrent == sequential
