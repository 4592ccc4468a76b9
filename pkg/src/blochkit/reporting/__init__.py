from .config import RunConfig, TestFnConfig, config_from_dict, load_config, loads_config
from .pipeline import run
from .report import SCHEMA, Report, csv_text, emit, plot_texts

__all__ = ["RunConfig", "TestFnConfig", "config_from_dict", "load_config", "loads_config", "run", "SCHEMA",
           "Report", "csv_text", "emit", "plot_texts"]
