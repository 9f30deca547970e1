"""Configuration management for odelip"""

import os
from typing import List
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Config:
    """Process-wide defaults"""
    
    # Output
    OUTPUT_DIR: str = os.getenv("ODELIP_OUTPUT_DIR", "results")
    
    # Integration
    RK4_SUBSTEPS: int = int(os.getenv("ODELIP_RK4_SUBSTEPS", "20"))
    
    # Data pipeline
    EXTENSION_DEPTH: int = int(os.getenv("ODELIP_EXTENSION_DEPTH", "2"))
    TRAIN_FRACTION: float = float(os.getenv("ODELIP_TRAIN_FRACTION", "0.8"))
    
    # Network
    LRELU_EPS: float = float(os.getenv("ODELIP_LRELU_EPS", "0.01"))
    
    # Lipschitz probe sizes
    STEP_PROBE_N: int = int(os.getenv("ODELIP_STEP_PROBE_N", "64"))
    REPORT_PROBE_N: int = int(os.getenv("ODELIP_REPORT_PROBE_N", "1024"))
    
    # Regularization grid
    BASELINE_ALPHA: float = 0.01
    DEFAULT_ALPHAS: List[float] = [
        float(x) for x in os.getenv("ODELIP_ALPHAS", "0,0.01,0.005,0.0025,0.001").split(",")
    ]
    
    # Recovery grid
    GRID_NT: int = int(os.getenv("ODELIP_GRID_NT", "100"))
    GRID_NX: int = int(os.getenv("ODELIP_GRID_NX", "100"))
    RELATIVE_FLOOR: float = 1e-8
    
    # Parallel fan-out for independent runs
    MAX_WORKERS: int = int(os.getenv("ODELIP_MAX_WORKERS", "4"))
    
    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
