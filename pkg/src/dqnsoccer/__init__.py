"""5v5 robot soccer simulator with a from-scratch DQN training harness."""

__version__ = "0.1.0"

from dqnsoccer.config import AppConfig, FieldConfig, load_config

__all__ = ["AppConfig", "FieldConfig", "load_config", "__version__"]
