from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from contextlib import asynccontextmanager
import logging

from app.core.config import settings
from app.api.routes import ping, coarray, lemma, experiments

logger = logging.getLogger(__name__)

@asynccontextmanager
async def lifespan(app: FastAPI):
    # Startup
    logger.info(f"🚀 {settings.title} {settings.version} up - {settings.threads} trial thread(s)")
    yield
    # Shutdown
    logger.info(f"👋 {settings.title} shutting down")

app = FastAPI(
    title=settings.title,
    version=settings.version,
    description=settings.description,
    lifespan=lifespan
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(ping.router, prefix=settings.api_prefix)
app.include_router(coarray.router, prefix=settings.api_prefix)
app.include_router(lemma.router, prefix=settings.api_prefix)
app.include_router(experiments.router, prefix=settings.api_prefix)

@app.get("/")
async def root():
    """Root endpoint."""
    return {
        "message": "SDCA Lab",
        "version": settings.version,
        "docs": "/docs"
    }
