"""HTTP service wrapping the benchmark harness.

POST /experiments runs the configured algorithms on a dataset readable by
the server and returns the report together with rendered table/plot files,
so a thin client can write byte-identical artifacts locally.

Run with: uvicorn clusterbench.service:app
"""

from typing import Dict, List, Optional, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .bench import (
    ALGORITHMS,
    ConfigError,
    RunConfig,
    render_plot_files,
    render_report_files,
    report_to_dict,
    run_experiment,
)
from .core import DataError

app = FastAPI(title="clusterbench", version="0.1.0")


class ExperimentRequest(BaseModel):
    dataset_path: str
    class_col: Optional[int] = None
    algorithms: List[str] = Field(default=list(ALGORITHMS))
    k: int = 5
    seed: int = 0
    restarts: int = 1
    eta: float = 0.05
    sigma2: Union[float, str] = "data_variance"
    em_variant: str = "standard"
    max_iters: int = 300
    max_epochs: int = 100
    tol: float = 1e-8
    output_format: str = "json"
    emit_ones: bool = False


class ExperimentResponse(BaseModel):
    report: Dict
    files: Dict[str, str]


def _to_config(req: ExperimentRequest) -> RunConfig:
    return RunConfig(
        dataset_path=req.dataset_path,
        class_col=req.class_col,
        algorithms=tuple(req.algorithms),
        k=req.k,
        seed=req.seed,
        restarts=req.restarts,
        eta=req.eta,
        sigma2=req.sigma2,
        em_variant=req.em_variant,
        max_iters=req.max_iters,
        max_epochs=req.max_epochs,
        tol=req.tol,
        output_format=req.output_format,
        emit_ones=req.emit_ones,
    )


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/experiments", response_model=ExperimentResponse)
def experiments(req: ExperimentRequest) -> ExperimentResponse:
    cfg = _to_config(req)
    try:
        report, data = run_experiment(cfg)
    except (ConfigError, DataError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except RuntimeError as exc:
        raise HTTPException(status_code=500, detail=str(exc))
    files = render_report_files(report, cfg.output_format)
    assignments = {r.name: r.assignment for r in report.results}
    files.update(render_plot_files(report, data, assignments))
    return ExperimentResponse(report=report_to_dict(report), files=files)
