"""procbench: deterministic procedural game environments with a
train/test generalization harness.

Three games share one observation contract (64x64x3 bytes): coinrun
(reach the single coin), platforms (collect every coin), and mazes
(walk to the goal).  Levels are pure functions of 32-bit seeds; the
vectorized facade, wrappers, and benchmark protocol sit on top.
"""

from .benchmark import (
    COINRUN_TRAIN_SIZES, PRESETS, EvalResult, GapRow, ProtocolConfig,
    TrainingPreset, build_level_sets, evaluate, gap_report,
)
from .errors import (
    ConfigError, EpisodeFinishedError, InfeasibleError, LevelFormatError,
    ProcbenchError,
)
from .levels import (
    CoinRunLevel, MazeLevel, MonsterSpec, PlatformsLevel, TileGrid,
    deserialize_level, generate, generate_coinrun, generate_maze,
    generate_platforms, sample_difficulty, serialize_level,
    shortest_path_length,
)
from .outcome import Outcome
from .render import render_maze, render_platformer, write_ppm
from .rng import Rng, derive_stream
from .tiles import Cell, Tile
from .vecenv import (
    ABI_VERSION, GAMES, LevelSet, StepResult, VecEnv, WrapperSpec,
    action_space_size, create, sample_level,
)
from .wrappers import (
    CutoutConfig, EpsilonGreedyConfig, FrameStack, FrameStackConfig,
    apply_cutout, apply_epsilon_greedy, stack_frames,
)

__version__ = "0.1.0"
