import os
import logging
from dataclasses import dataclass, field, replace

import yaml

CONFIG_FILENAME = "consensus-obs.yaml"
MAX_N_ENV = "CONSENSUS_OBS_MAX_N"

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tolerances:
    residual: float = 1e-9
    witness_zero: float = 1e-12
    symmetry: float = 1e-12
    reachable_projection: float = 1e-6
    output_gap: float = 1e-7
    steering_error: float = 1e-3


@dataclass(frozen=True)
class SimulationDefaults:
    dt: float = 0.01
    epsilon: float = 0.25
    horizon: float = 20.0
    gramian_horizon: float = 10.0
    seed: int = 0


@dataclass(frozen=True)
class Settings:
    max_n: int = 10_000
    log_file: str = "consensus_obs.log"
    kalman_max_n: int = 25
    oracle_max_n: int = 400
    workers: int = 1
    tolerances: Tolerances = field(default_factory=Tolerances)
    simulation: SimulationDefaults = field(default_factory=SimulationDefaults)

    @classmethod
    def from_mapping(cls, config):
        """
        Build settings from a parsed YAML mapping. Unknown keys are ignored,
        missing keys fall back to the defaults above.
        """
        config = config or {}
        sys_conf = config.get('system', {}) or {}
        tol_conf = config.get('tolerances', {}) or {}
        sim_conf = config.get('simulation', {}) or {}

        tolerances = Tolerances(**{k: float(v) for k, v in tol_conf.items()
                                   if k in Tolerances.__dataclass_fields__})
        simulation = SimulationDefaults(**{k: v for k, v in sim_conf.items()
                                           if k in SimulationDefaults.__dataclass_fields__})
        settings = cls(
            max_n=int(sys_conf.get('max_n', cls.max_n)),
            log_file=sys_conf.get('log_file', cls.log_file),
            kalman_max_n=int(sys_conf.get('kalman_max_n', cls.kalman_max_n)),
            oracle_max_n=int(sys_conf.get('oracle_max_n', cls.oracle_max_n)),
            workers=int(sys_conf.get('workers', cls.workers)),
            tolerances=tolerances,
            simulation=simulation,
        )
        return settings.with_env_overrides()

    def with_env_overrides(self):
        raw = os.environ.get(MAX_N_ENV)
        if not raw:
            return self
        try:
            return replace(self, max_n=int(raw))
        except ValueError:
            logger.warning(f"Ignoring non-integer {MAX_N_ENV}={raw!r}")
            return self


DEFAULT_SETTINGS = Settings()


def load_config(config_path=None):
    """
    Load configuration from a specific path or search standard locations.
    Priority:
    1. CLI Argument (if provided)
    2. Current Directory (consensus-obs.yaml)
    3. User Config Directory (~/.config/consensus-obs/config.yaml)
    4. Home Directory (~/.consensus-obs.yaml)
    """
    search_paths = []

    if config_path:
        search_paths.append(config_path)

    search_paths.extend([
        os.path.join(os.getcwd(), CONFIG_FILENAME),
        os.path.expanduser("~/.config/consensus-obs/config.yaml"),
        os.path.expanduser("~/.consensus-obs.yaml"),
    ])

    for path in search_paths:
        if os.path.exists(path):
            try:
                with open(path, 'r') as f:
                    logger.info(f"Loading config from: {path}")
                    return yaml.safe_load(f) or {}
            except (OSError, yaml.YAMLError) as e:
                logger.error(f"Error loading config from {path}: {e}")

    return {}


def load_settings(config_path=None):
    return Settings.from_mapping(load_config(config_path))
