"""Worker pool for per-weight computations"""

from .processor import run_weight_jobs, default_workers

__all__ = ["run_weight_jobs", "default_workers"]
