"""Session-oriented JSON-over-HTTP service around the ordering pipeline.

A session owns one ingested dataset plus the current (alpha, beta, extent)
parameters and every cached derivative. Changing alpha or the extent
recomputes the mixed distances, the ordering, and the ordering-dependent
measures; changing beta alone only re-thresholds the cached hop distances.
The per-timestep Moran profile depends only on data and graph, so it is
computed once at ingestion.

State-changing requests on a session are serialized behind a lock; reads see
immutable state snapshots and never block each other.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, replace
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .geodata import (
    ContiguityGraph,
    GeoDataError,
    RegionSet,
    TimeSeriesMatrix,
    build_contiguity,
    load_geojson,
    load_timeseries,
)
from .layout import Brush, LayoutConfig, aggregate_selection, build_layout, ordering_path
from .ordering import DistanceMatrix, Ordering, ahc_order, mix_distances, pairwise_geo, pairwise_ts
from .quality import (
    BorderWeights,
    GapMask,
    MoranProfile,
    QualityReport,
    default_beta,
    discontinuity_borders,
    moran_profile,
    trust_gaps,
)
from .validation import check_alpha, check_beta, check_extent, check_rule

DEFAULT_ALPHA = 0.5


@dataclass(frozen=True)
class SessionState:
    """Immutable snapshot of one session; replaced wholesale on change."""

    session_id: str
    regions: RegionSet
    graph: ContiguityGraph
    series: TimeSeriesMatrix
    geo: DistanceMatrix
    moran: MoranProfile
    alpha: float
    beta: int
    extent: tuple[int, int] | None
    ordering: Ordering
    gaps: GapMask
    borders: BorderWeights
    revision: int
    ordering_revision: int

    def info(self) -> dict:
        return {
            "session_id": self.session_id,
            "revision": self.revision,
            "ordering_revision": self.ordering_revision,
            "alpha": self.alpha,
            "beta": self.beta,
            "extent": list(self.extent) if self.extent is not None else None,
            "rule": self.graph.rule,
            "n_regions": len(self.regions),
            "n_steps": self.series.n_steps,
        }

    def quality(self) -> QualityReport:
        return QualityReport(self.beta, self.gaps, self.borders, self.moran)


class _Session:
    def __init__(self, state: SessionState):
        self.lock = threading.Lock()
        self.state = state


class SessionStore:
    """In-memory sessions; single writer per session, lock-free readers."""

    def __init__(self, snapshot_dir: str | None = None):
        self._sessions: dict[str, _Session] = {}
        self._snapshot_dir = Path(snapshot_dir) if snapshot_dir else None

    def create(self, geojson, csv_text: str, id_property: str = "id",
               rule: str = "queen", alpha: float | None = None,
               beta: int | None = None) -> SessionState:
        check_rule(rule)
        regions = load_geojson(geojson, id_property)
        graph = build_contiguity(regions, rule)
        series = load_timeseries(csv_text, regions)
        alpha = check_alpha(DEFAULT_ALPHA if alpha is None else alpha)
        beta = check_beta(default_beta(graph) if beta is None else beta)
        geo = pairwise_geo(regions)
        ordering = _compute_ordering(geo, series, alpha, None)
        state = SessionState(
            session_id=uuid.uuid4().hex,
            regions=regions,
            graph=graph,
            series=series,
            geo=geo,
            moran=moran_profile(series, graph),
            alpha=alpha,
            beta=beta,
            extent=None,
            ordering=ordering,
            gaps=trust_gaps(ordering, graph, beta),
            borders=discontinuity_borders(ordering, graph),
            revision=1,
            ordering_revision=1,
        )
        self._sessions[state.session_id] = _Session(state)
        self._snapshot(state, geojson, csv_text)
        return state

    def _snapshot(self, state: SessionState, geojson, csv_text: str) -> None:
        if self._snapshot_dir is None:
            return
        self._snapshot_dir.mkdir(parents=True, exist_ok=True)
        payload = {
            "session_id": state.session_id,
            "rule": state.graph.rule,
            "geojson": json.loads(geojson) if isinstance(geojson, str) else geojson,
            "csv": csv_text,
        }
        path = self._snapshot_dir / f"{state.session_id}.json"
        path.write_text(json.dumps(payload), encoding="utf-8")

    def get(self, session_id: str) -> SessionState:
        session = self._sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        return session.state

    def set_params(self, session_id: str, alpha: float | None = None,
                   beta: int | None = None,
                   extent: tuple[int, int] | None = None,
                   clear_extent: bool = False) -> SessionState:
        session = self._sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        with session.lock:
            state = session.state
            new_alpha = state.alpha if alpha is None else check_alpha(alpha)
            new_beta = state.beta if beta is None else check_beta(beta)
            if clear_extent:
                new_extent = None
            elif extent is None:
                new_extent = state.extent
            else:
                new_extent = check_extent(extent, state.series.n_steps)

            if (new_alpha, new_beta, new_extent) == (state.alpha, state.beta, state.extent):
                return state  # idempotent: nothing changed, nothing recomputed

            if new_alpha == state.alpha and new_extent == state.extent:
                # beta-only: re-threshold the cached hop distances
                new_state = replace(
                    state,
                    beta=new_beta,
                    gaps=state.gaps.rethreshold(new_beta),
                    revision=state.revision + 1,
                )
            else:
                ordering = _compute_ordering(state.geo, state.series, new_alpha, new_extent)
                new_state = replace(
                    state,
                    alpha=new_alpha,
                    beta=new_beta,
                    extent=new_extent,
                    ordering=ordering,
                    gaps=trust_gaps(ordering, state.graph, new_beta),
                    borders=discontinuity_borders(ordering, state.graph),
                    revision=state.revision + 1,
                    ordering_revision=state.ordering_revision + 1,
                )
            session.state = new_state
            return new_state


def _compute_ordering(geo: DistanceMatrix, series: TimeSeriesMatrix,
                      alpha: float, extent: tuple[int, int] | None) -> Ordering:
    tsd = pairwise_ts(series, extent)
    mixed = mix_distances(geo, tsd, alpha)
    return ahc_order(mixed, alpha=alpha, extent=extent)


# -- HTTP layer ---------------------------------------------------------------


class CreateSessionBody(BaseModel):
    geojson: dict | str
    csv: str
    id_property: str = "id"
    rule: str | None = None  # server default applies when omitted
    alpha: float | None = None
    beta: int | None = None


class ParamsBody(BaseModel):
    alpha: float | None = None
    beta: int | None = None
    extent: tuple[int, int] | None = None


class SelectionBody(BaseModel):
    row_range: tuple[int, int]
    time_range: tuple[int, int]
    stat: str = "mean"


def _stale_warning(state: SessionState, revision: int | None) -> dict:
    if revision is not None and revision != state.revision:
        return {"warning": f"stale revision {revision}, current is {state.revision}"}
    return {}


def create_app(store: SessionStore | None = None,
               default_alpha: float = DEFAULT_ALPHA,
               default_rule: str = "queen",
               snapshot_dir: str | None = None) -> FastAPI:
    """Build the HTTP app; configuration comes from the CLI or environment."""
    store = store if store is not None else SessionStore(snapshot_dir=snapshot_dir)
    app = FastAPI(title="pixelorder", version="0.1.0")
    app.state.store = store
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],  # desk tool; the browser client runs on its own port
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _get(session_id: str) -> SessionState:
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(404, detail={"code": "unknown_session",
                                             "message": session_id}) from None

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        try:
            state = store.create(
                body.geojson, body.csv, body.id_property,
                check_rule(body.rule or default_rule),
                default_alpha if body.alpha is None else body.alpha,
                body.beta,
            )
        except (GeoDataError, ValueError) as exc:
            raise HTTPException(422, detail={"code": "ingestion_error",
                                             "message": str(exc)}) from exc
        return state.info()

    @app.patch("/sessions/{session_id}/params")
    def set_params(session_id: str, body: ParamsBody):
        _get(session_id)
        started = time.perf_counter()
        try:
            state = store.set_params(
                session_id,
                alpha=body.alpha,
                beta=body.beta,
                extent=body.extent,
                clear_extent="extent" in body.model_fields_set and body.extent is None,
            )
        except ValueError as exc:
            raise HTTPException(422, detail={"code": "invalid_params",
                                             "message": str(exc)}) from exc
        return {
            **state.info(),
            "elapsed_ms": round(1000 * (time.perf_counter() - started), 3),
            "ordering": state.ordering.to_dict(),
            "quality": state.quality().to_dict(),
        }

    @app.get("/sessions/{session_id}")
    def session_info(session_id: str):
        return _get(session_id).info()

    @app.get("/sessions/{session_id}/layout")
    def get_layout(session_id: str, revision: int | None = None,
                   total_width: float = Query(default=LayoutConfig.total_width, gt=0),
                   resolve_colors: bool = False):
        state = _get(session_id)
        config = LayoutConfig(total_width=total_width)
        layout = build_layout(state.series, state.ordering, state.gaps,
                              state.moran, config)
        return {
            **state.info(),
            **_stale_warning(state, revision),
            "layout": layout.to_dict(resolve=resolve_colors),
        }

    @app.get("/sessions/{session_id}/quality")
    def get_quality(session_id: str, revision: int | None = None):
        state = _get(session_id)
        return {
            **state.info(),
            **_stale_warning(state, revision),
            "quality": state.quality().to_dict(),
        }

    @app.get("/sessions/{session_id}/path")
    def get_path(session_id: str, revision: int | None = None):
        state = _get(session_id)
        path = ordering_path(state.ordering, state.regions, state.gaps)
        return {
            **state.info(),
            **_stale_warning(state, revision),
            "path": path.to_dict(),
        }

    @app.post("/sessions/{session_id}/selection")
    def post_selection(session_id: str, body: SelectionBody):
        state = _get(session_id)
        try:
            brush = Brush(tuple(body.row_range), tuple(body.time_range), body.stat)
            glyph = aggregate_selection(brush, state.series, state.ordering,
                                        borders=state.borders)
        except ValueError as exc:
            raise HTTPException(422, detail={"code": "invalid_selection",
                                             "message": str(exc)}) from exc
        return {**state.info(), "glyph": glyph.to_dict()}

    return app
