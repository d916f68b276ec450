import logging
from typing import List, Optional

import numpy as np
from fastapi import APIRouter
from pydantic import BaseModel, Field

from ..core.config import get_settings
from ..models.markov_models import TransitionMatrix
from ..models.network_models import NetworkParams, StateVec
from ..services.dynamics.parameters import vec_params
from ..services.dynamics.simulator import simulate_trajectory
from ..services.likelihood.objective import expected_objective
from ..services.markov.kernel import build_transition_matrix
from ..services.markov.lemma import verify_lemma1
from ..services.markov.stationary import stationary_distribution
from ..services.transforms.identifiability import kernel_distance, recover_from_kernel

logger = logging.getLogger(__name__)

# Main router
router = APIRouter()

analysis_router = APIRouter(tags=["Markov Analysis"])
simulation_router = APIRouter(tags=["Simulation"])
identifiability_router = APIRouter(tags=["Identifiability"])


class SimulateRequest(BaseModel):
    params: NetworkParams
    T: int = Field(..., ge=1, le=1_000_000, description="Number of steps")
    seed: int = Field(0, ge=0, description="Seed of the Philox stream")
    s0: int = Field(0, ge=0, description="Initial state bitmask")


class SimulateResponse(BaseModel):
    n: int
    seed: int
    initial: int
    observations: List[int]


class AnalyzeResponse(BaseModel):
    n: int
    kernel_min_entry: float
    row_sum_max_deviation: float
    stationary: List[float]
    stationary_residual: float
    lemma1_max_deviation: Optional[float] = None
    lemma1_passed: Optional[bool] = None
    objective_grad_norm: Optional[float] = None
    objective_grad_ok: Optional[bool] = None


class DistanceRequest(BaseModel):
    first: NetworkParams
    second: NetworkParams


class DistanceResponse(BaseModel):
    distance: float


class RecoverRequest(BaseModel):
    n: int = Field(..., ge=2)
    rows: List[List[float]] = Field(..., description="Row-major base kernel")


@simulation_router.post("/simulate",
                        response_model=SimulateResponse,
                        summary="Simulate",
                        description="Simulate a seeded trajectory of the quantized dynamics")
async def simulate(request: SimulateRequest):
    logger.info(f"Simulate request: n = {request.params.n}, T = {request.T}, seed = {request.seed}")
    trajectory = simulate_trajectory(
        request.params,
        s0=StateVec(bits=request.s0, n=request.params.n),
        T=request.T,
        seed=request.seed,
    )
    return SimulateResponse(
        n=trajectory.n,
        seed=request.seed,
        initial=trajectory.initial.bits,
        observations=trajectory.observations.tolist(),
    )


@analysis_router.post("/analyze",
                      response_model=AnalyzeResponse,
                      summary="Analyze",
                      description="Exact kernel statistics, stationary law, pair-chain check and objective gradient at truth")
async def analyze(params: NetworkParams):
    settings = get_settings()
    kernel = build_transition_matrix(params)
    stationary = stationary_distribution(kernel)
    response = AnalyzeResponse(
        n=params.n,
        kernel_min_entry=kernel.min_entry(),
        row_sum_max_deviation=kernel.row_sum_deviation(),
        stationary=stationary.pi.tolist(),
        stationary_residual=stationary.residual,
    )
    if params.n <= settings.MAX_EXTENDED_AGENTS:
        lemma = verify_lemma1(params)
        response.lemma1_max_deviation = lemma.max_deviation
        response.lemma1_passed = lemma.passed
        response.objective_grad_norm = expected_objective(vec_params(params), params).grad_norm
        response.objective_grad_ok = response.objective_grad_norm < settings.OBJECTIVE_GRAD_TOL
    return response


@identifiability_router.post("/kernel-distance",
                             response_model=DistanceResponse,
                             summary="Kernel distance",
                             description="Max entrywise difference of two base kernels")
async def distance(request: DistanceRequest):
    return DistanceResponse(distance=kernel_distance(request.first, request.second))


@identifiability_router.post("/recover",
                             response_model=NetworkParams,
                             summary="Recover parameters",
                             description="Invert a base kernel into sigma = 1 parameters")
async def recover(request: RecoverRequest):
    logger.info(f"Recover request for n = {request.n}")
    kernel = TransitionMatrix(n=request.n, kind="base", rows=np.array(request.rows, dtype=float))
    return recover_from_kernel(kernel, request.n)


@router.get("/health", summary="Health check")
async def health():
    settings = get_settings()
    return {"status": "ok", "app": settings.APP_NAME, "version": settings.VERSION}


# Include all routers in the main router
router.include_router(analysis_router)
router.include_router(simulation_router)
router.include_router(identifiability_router)
