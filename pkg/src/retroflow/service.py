"""HTTP facade over the assimilation pipeline for the tuning console.

POST /api/runs                  submit a run (JSON dataset reference, or
                                multipart with an uploaded image) -> 202 {run_id}
GET  /api/runs/{id}             status document with progress and latest norms
GET  /api/runs/{id}/artifacts/{name}
                                desiredT.png | computed0.png | evolvedT.png |
                                report.json | report.txt | norms.csv
GET  /api/datasets              bundled test images

Runs execute on a bounded worker pool; records live in memory with artifacts
persisted under runs_dir/<run_id>/, so a restart forgets queued work but
never serves partial artifacts as done.
"""

from __future__ import annotations

import csv
import io
import json
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field, ValidationError

from . import datasets, imageio
from .errors import DivergenceError, IngestionError, RetroflowError
from .pipeline import run_assimilation

ARTIFACT_TYPES = {
    "desiredT.png": "image/png",
    "computed0.png": "image/png",
    "evolvedT.png": "image/png",
    "report.json": "application/json",
    "report.txt": "text/plain",
    "norms.csv": "text/csv",
}

NORM_FLUSH_EVERY = 100


class RunParams(BaseModel):
    T: float = Field(6e-4, gt=0)
    steps: int = Field(800, ge=2)
    gamma: float = Field(4e-9, ge=0)
    p: float = Field(3.25, gt=1)
    nu: float = Field(0.01, gt=0)
    eta: float = Field(0.1, ge=0, le=0.2)
    xi: float = Field(0.53, ge=0, le=1)
    taper: int = Field(8, ge=0)
    render: str = Field("absolute", pattern="^(absolute|minmax)$")


@dataclass
class RunRecord:
    run_id: str
    params: dict
    status: str = "queued"   # queued -> running -> done | diverged | failed
    step: int = 0
    total: int = 0
    phase: str = ""
    error: dict | None = None
    norm_rows: list = field(default_factory=list)

    def progress(self) -> dict:
        frac = self.step / self.total if self.total else 0.0
        return {"step": self.step, "total": self.total,
                "fraction": round(frac, 6), "phase": self.phase}


class RunStore:
    """Single-writer (the worker) / multi-reader record registry."""

    def __init__(self):
        self._lock = threading.Lock()
        self._records: dict[str, RunRecord] = {}

    def add(self, rec: RunRecord) -> None:
        with self._lock:
            self._records[rec.run_id] = rec

    def get(self, run_id: str) -> RunRecord | None:
        with self._lock:
            return self._records.get(run_id)

    def update(self, run_id: str, **kwargs) -> None:
        with self._lock:
            rec = self._records[run_id]
            for key, val in kwargs.items():
                setattr(rec, key, val)

    def snapshot(self, run_id: str) -> dict | None:
        with self._lock:
            rec = self._records.get(run_id)
            if rec is None:
                return None
            latest = rec.norm_rows[-1] if rec.norm_rows else None
            return {"run_id": rec.run_id, "status": rec.status,
                    "progress": rec.progress(), "latest": latest,
                    "error": rec.error, "params": rec.params}


def _norm_row_dict(phase: str, row) -> dict:
    return {"phase": phase, "step": row.step, "time": row.time,
            "psi": row.psi, "u": row.u, "v": row.v, "omega": row.omega,
            "speed_max": row.speed_max}


def _write_norms_csv(path: Path, rows: list[dict]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["phase", "step", "time", "psi", "u", "v", "omega", "speed_max"])
    for r in rows:
        w.writerow([r["phase"], r["step"], f"{r['time']:.12g}",
                    *(f"{r[k]:.12g}" if r[k] is not None else ""
                      for k in ("psi", "u", "v", "omega", "speed_max"))])
    path.write_text(buf.getvalue())


def _execute_run(store: RunStore, run_id: str, psi, params: dict,
                 run_dir: Path) -> None:
    store.update(run_id, status="running", total=2 * params["steps"],
                 phase="backward")
    render = params["render"]
    imageio.save_png(imageio.field_to_image(psi, mode=render),
                     run_dir / "desiredT.png")

    rec = store.get(run_id)
    counter = {"n": 0}

    def on_step(state, row):
        counter["n"] += 1
        phase = "backward" if counter["n"] <= params["steps"] else "forward"
        with store._lock:
            rec.step = counter["n"]
            rec.phase = phase
            rec.norm_rows.append(_norm_row_dict(phase, row))
        if counter["n"] % NORM_FLUSH_EVERY == 0:
            _write_norms_csv(run_dir / "norms.csv", list(rec.norm_rows))

    try:
        result = run_assimilation(
            psi, t_final=params["T"], steps=params["steps"],
            gamma=params["gamma"], p=params["p"], nu=params["nu"],
            raw_xi=params["xi"], raw_eta=params["eta"],
            taper_width=params["taper"], on_step=on_step)
    except DivergenceError as err:
        _write_norms_csv(run_dir / "norms.csv", list(rec.norm_rows))
        phase = "backward" if counter["n"] < params["steps"] else "forward"
        info = {"kind": "divergence", "step": err.step_index, "phase": phase,
                "message": str(err)}
        (run_dir / "report.json").write_text(json.dumps(
            {"status": "diverged", "error": info, "params": params},
            sort_keys=True, indent=2))
        store.update(run_id, status="diverged", error=info)
        return
    except RetroflowError as err:
        info = {"kind": "failed", "message": str(err)}
        store.update(run_id, status="failed", error=info)
        return

    imageio.save_png(imageio.field_to_image(result.computed0.psi, mode=render),
                     run_dir / "computed0.png")
    imageio.save_png(imageio.field_to_image(result.evolved.psi, mode=render),
                     run_dir / "evolvedT.png")
    (run_dir / "report.json").write_text(result.report.to_json())
    (run_dir / "report.txt").write_text(result.report.to_text())
    _write_norms_csv(run_dir / "norms.csv", list(rec.norm_rows))
    store.update(run_id, status="done", step=2 * params["steps"])


def create_app(runs_dir: Path | str = "runs", workers: int = 2) -> FastAPI:
    runs_dir = Path(runs_dir)
    runs_dir.mkdir(parents=True, exist_ok=True)
    store = RunStore()
    pool = ThreadPoolExecutor(max_workers=workers)

    app = FastAPI(title="retroflow service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    app.state.store = store

    @app.get("/api/datasets")
    def get_datasets():
        return datasets.list_datasets()

    @app.post("/api/runs")
    async def submit_run(request: Request):
        content_type = request.headers.get("content-type", "")
        try:
            if content_type.startswith("multipart/"):
                form = await request.form()
                upload = form.get("file")
                if upload is None:
                    return JSONResponse(status_code=422, content={
                        "errors": {"file": "image file is required"}})
                raw = await upload.read()
                params = RunParams(**json.loads(form.get("params", "{}")))
                img = imageio.load_image_bytes(raw, upload.filename)
            else:
                body = await request.json()
                params = RunParams(**body.get("params", {}))
                name = body.get("dataset")
                if not name:
                    return JSONResponse(status_code=422, content={
                        "errors": {"dataset": "dataset name or file upload "
                                              "is required"}})
                try:
                    img = datasets.get_dataset(name, int(body.get("n", 256)))
                except KeyError:
                    return JSONResponse(status_code=404, content={
                        "detail": f"unknown dataset {name!r}"})
            psi = imageio.intensity_to_stream(img, taper_width=params.taper)
        except ValidationError as err:
            errors = {".".join(str(p) for p in e["loc"]): e["msg"]
                      for e in err.errors()}
            return JSONResponse(status_code=422, content={"errors": errors})
        except (IngestionError, json.JSONDecodeError) as err:
            return JSONResponse(status_code=422, content={
                "errors": {"file": str(err)}})

        run_id = uuid.uuid4().hex[:12]
        run_dir = runs_dir / run_id
        run_dir.mkdir(parents=True)
        rec = RunRecord(run_id=run_id, params=params.model_dump())
        store.add(rec)
        pool.submit(_execute_run, store, run_id, psi, params.model_dump(),
                    run_dir)
        return JSONResponse(status_code=202, content={"run_id": run_id})

    @app.get("/api/runs/{run_id}")
    def get_status(run_id: str):
        snap = store.snapshot(run_id)
        if snap is None:
            return JSONResponse(status_code=404,
                                content={"detail": "unknown run id"})
        return snap

    @app.get("/api/runs/{run_id}/artifacts/{name}")
    def get_artifact(run_id: str, name: str):
        rec = store.get(run_id)
        if rec is None:
            return JSONResponse(status_code=404,
                                content={"detail": "unknown run id"})
        if name not in ARTIFACT_TYPES:
            return JSONResponse(status_code=404,
                                content={"detail": f"unknown artifact {name!r}"})
        path = runs_dir / run_id / name
        if not path.is_file():
            return JSONResponse(status_code=409,
                                content={"detail": "artifact not ready"})
        return Response(content=path.read_bytes(),
                        media_type=ARTIFACT_TYPES[name])

    return app


def main():  # manual launch: python -m retroflow.service
    import uvicorn
    uvicorn.run(create_app(), host="127.0.0.1", port=8710)


if __name__ == "__main__":
    main()
