"""HTTP face of the explanation engine.

A small FastAPI app over one loaded forest: inspect the model, classify
instances, extract explanations, or download the DIMACS encoding of an
instance's misclassification formula. The CLI's serve subcommand mounts
this app; tests drive it in process.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .encoder import EncoderOptions, encode_for_instance
from .explain import explain_instance
from .model import Forest, ModelError, check_instance, predict_index, vote_counts

Value = Union[int, float, str]


class FeatureInfo(BaseModel):
    id: int
    name: str
    kind: str
    values: list[str] = Field(default_factory=list)


class ModelInfo(BaseModel):
    classes: list[str]
    trees: int
    features: list[FeatureInfo]


class PredictRequest(BaseModel):
    instances: list[list[Value]]


class Prediction(BaseModel):
    prediction: str
    votes: dict[str, int]


class PredictResponse(BaseModel):
    predictions: list[Prediction]


class ExplainRequest(BaseModel):
    instance: list[Value]
    mode: Literal["axp", "cxp", "enumerate"] = "axp"
    order: Literal["ascending", "descending"] = "ascending"
    limit: Optional[int] = None
    seed: int = 0
    chaining: bool = True
    naive_comparators: bool = False


class ExplanationOut(BaseModel):
    kind: str
    features: list[int]  # public 1-based feature ids
    names: list[str]
    immutable: bool


class ExplainResponse(BaseModel):
    prediction: str
    votes: dict[str, int]
    explanations: list[ExplanationOut]
    stats: dict[str, float]


class EncodeRequest(BaseModel):
    instance: list[Value]
    chaining: bool = True
    naive_comparators: bool = False


class SoftLiteralOut(BaseModel):
    literal: int
    feature: int
    name: str


class EncodeResponse(BaseModel):
    dimacs: str
    soft_literals: list[SoftLiteralOut]
    vars: int
    clauses: int


def create_app(forest: Forest) -> FastAPI:
    app = FastAPI(title="forestexplain", version="0.1.0")
    app.state.forest = forest

    def checked(values) -> tuple:
        try:
            return check_instance(forest, values)
        except ModelError as e:
            raise HTTPException(status_code=400, detail=str(e)) from None

    @app.get("/model", response_model=ModelInfo)
    def model_info() -> ModelInfo:
        return ModelInfo(
            classes=list(forest.classes),
            trees=len(forest.trees),
            features=[
                FeatureInfo(
                    id=f.id, name=f.name, kind=f.kind,
                    values=[str(v) for v in f.values],
                )
                for f in forest.features
            ],
        )

    @app.post("/predict", response_model=PredictResponse)
    def predict(req: PredictRequest) -> PredictResponse:
        out = []
        for values in req.instances:
            inst = checked(values)
            out.append(
                Prediction(
                    prediction=forest.classes[predict_index(forest, inst)],
                    votes=vote_counts(forest, inst),
                )
            )
        return PredictResponse(predictions=out)

    @app.post("/explain", response_model=ExplainResponse)
    def explain(req: ExplainRequest) -> ExplainResponse:
        inst = checked(req.instance)
        options = EncoderOptions(
            chaining=req.chaining, naive_comparators=req.naive_comparators,
        )
        result = explain_instance(
            forest, inst, req.mode,
            options=options, seed=req.seed, order=req.order, limit=req.limit,
        )
        payload = result.to_dict(forest)
        return ExplainResponse(
            prediction=payload["prediction"],
            votes=payload["votes"],
            explanations=[ExplanationOut(**e) for e in payload["explanations"]],
            stats={k: float(v) for k, v in payload["stats"].items()},
        )

    @app.post("/encode", response_model=EncodeResponse)
    def encode(req: EncodeRequest) -> EncodeResponse:
        inst = checked(req.instance)
        options = EncoderOptions(
            chaining=req.chaining, naive_comparators=req.naive_comparators,
        )
        encoding, softs = encode_for_instance(forest, inst, options)
        return EncodeResponse(
            dimacs=encoding.to_dimacs(),
            soft_literals=[
                SoftLiteralOut(
                    literal=s.literal,
                    feature=forest.features[s.feature].id,
                    name=forest.features[s.feature].name,
                )
                for s in softs
            ],
            vars=encoding.nvars,
            clauses=len(encoding.clauses),
        )

    return app
