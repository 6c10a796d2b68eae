"""Constant values used throughout the package."""

import typing

MIN_WINDOW_POINTS: typing.Final[int] = 2**10
"""Least number of grid steps between zero and the window radius."""

DEFAULT_LADDER_LEVELS: typing.Final[int] = 6
"""Number of dyadic rungs in a default window scale ladder."""

SUBADDITIVITY_SAMPLES: typing.Final[int] = 10_000
"""Number of random pairs used to spot-check subadditivity."""

DEFAULT_SEED: typing.Final[int] = 20_240_611
"""Seed used by every randomised scan unless configured otherwise."""

GRID_TOLERANCE: typing.Final[float] = 1e-9
"""Absolute tolerance for comparisons of grid-evaluated profiles."""

TAIL_FLAG_RATIO: typing.Final[float] = 1e-12
"""Edge integrand to accumulated integral ratio that flags a tail."""

ALIASING_TOLERANCE: typing.Final[float] = 1e-6
"""Largest admissible physical tail mass before an aliasing error."""

NEGATIVITY_FLOOR: typing.Final[float] = -1e-10
"""Values above this floor count as nonnegative after round-off."""

SOLVE_RELATIVE_TOLERANCE: typing.Final[float] = 1e-9
"""Relative residual accepted by the monotone equation solver."""

ALPHA_MAX_CLOSED_FORM: typing.Final[int] = 40
"""Default highest derivative order for closed-form models."""

ALPHA_MAX_SAMPLED: typing.Final[int] = 8
"""Default highest derivative order for sampled models."""

DEFAULT_N_MAX: typing.Final[int] = 12
"""Default number of Ehrenpreis units built for a unit sequence."""

EPSILON_SAFETY_FACTOR: typing.Final[float] = 0.5
"""Slack multiplied into every chosen asymptotic-sum cutoff scale."""

TREND_FACTOR: typing.Final[float] = 2.0
"""Per-scale improvement factor that makes a decay trend count."""

DEFAULT_XI_START: typing.Final[float] = 100.0
"""First interval center of the default counterexample ladder."""

DEFAULT_XI_RATIO: typing.Final[float] = 4.0
"""Ratio between consecutive default interval centers."""

MIN_INTERVAL_GAP: typing.Final[float] = 2.0
"""Least distance between consecutive excluded intervals."""

DEFAULT_A_LADDER: typing.Final[tuple[float, ...]] = (
    0.25,
    0.5,
    1.0,
    2.0,
    4.0,
    8.0,
    16.0,
)
"""Default ladder of constants for the slow decrease check."""

BALL_RESOLUTION: typing.Final[float] = 0.1
"""Largest grid step, as a fraction of the smallest tested ball radius."""

THREADS_ENVIRONMENT_VARIABLE: typing.Final[str] = "CONVOLAB_THREADS"
"""Environment variable capping internal parallelism."""

EXIT_OK: typing.Final[int] = 0
"""Exit code when all verdicts are verified or consistent."""

EXIT_REFUTED: typing.Final[int] = 2
"""Exit code when a refutation appears where verification was claimed."""

EXIT_INCONCLUSIVE: typing.Final[int] = 3
"""Exit code when at least one verdict is inconclusive."""

EXIT_CONFIG_ERROR: typing.Final[int] = 64
"""Exit code for unreadable configs or unresolved catalog keys."""

EXIT_PRECONDITION: typing.Final[int] = 65
"""Exit code for failed numerical preconditions."""

KERNEL_FILE_MAGIC: typing.Final[bytes] = b"CVLKERN1"
"""Magic bytes opening every binary kernel file."""

CATALOG_SEPARATOR: typing.Final[str] = ":"
"""Separator between a catalog prefix and its arguments."""
