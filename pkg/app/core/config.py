from pydantic import BaseSettings, Field
from typing import List
from dotenv import load_dotenv
import logging

# Load environment variables from .env file
load_dotenv()

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

class Settings(BaseSettings):
    # Monte Carlo execution
    threads: int = Field(1, ge=1)
    default_trials: int = 200

    # Numerics
    lemma_tolerance: float = 1e-8

    # Logging
    log_level: str = "INFO"

    # CORS Configuration
    cors_origins: List[str] = ["http://localhost:8080", "http://localhost:5173"]

    # API Configuration
    api_prefix: str = "/api"
    title: str = "SDCA Lab"
    version: str = "1.0.0"
    description: str = "Sum-difference co-array laboratory: co-array algebra, span-condition checks and SS-MUSIC Monte Carlo sweeps"

    class Config:
        env_file = ".env"
        env_prefix = "SDCA_LAB_"

settings = Settings()


def configure_logging(level: str) -> None:
    """Set the root log level; safe to call more than once."""
    logging.getLogger().setLevel(level.upper())


configure_logging(settings.log_level)

# Log successful config loading
logger.info(f"✅ Config loaded - threads: {settings.threads}, API: {settings.api_prefix}")
