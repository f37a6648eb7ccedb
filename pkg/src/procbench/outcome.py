"""Episode outcome labels shared by both simulators."""

from enum import Enum


class Outcome(str, Enum):
    RUNNING = "running"
    COIN_ALL = "coin_all"  # platformers: final coin collected
    GOAL = "goal"          # mazes: goal cell reached
    DEATH = "death"
    TIMEOUT = "timeout"
