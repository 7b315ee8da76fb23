"""Default values."""

""" Default table style in console. See tabulate docs for more. """
DEFAULT_GRID_STYLE = "fancy_grid"

""" The default configuration file name """
DEFAULT_CONFIG_PATH = "qpurity.json"

""" Default output directory """
DEFAULT_OUT = "."

""" Default state of a run """
DEFAULT_STATE = "vacuum"

""" Default detection efficiency """
DEFAULT_ETA = 0.9

""" Default sample size of a single simulation """
DEFAULT_N = 1000

""" Default Monte Carlo sample-size grid """
DEFAULT_N_GRID = (1000, 4000, 16000)

""" Default number of Monte Carlo replicates per grid point """
DEFAULT_REPLICATES = 200

""" Default bandwidth rule """
DEFAULT_RULE = "delta_star"

""" Default seed """
DEFAULT_SEED = 20240611

""" Default worker count """
DEFAULT_THREADS = 1

""" Threshold of the pure/mixed classifier """
DEFAULT_TAU = 0.02

""" Largest a·T² accepted by the kernel before e^{aT²} is considered unstable """
MAX_KERNEL_EXPONENT = 700.0

""" Largest Simpson spacing of the estimator t-grid """
MAX_T_SPACING = 0.05

""" Relative size of a negligible integrand tail """
TAIL_TOLERANCE = 1e-12

""" Default number of radial Simpson nodes (a power of two) """
DEFAULT_RADIAL_NODES = 4096

""" Minimum number of φ nodes of the marginal characteristic function """
MIN_PHI_NODES = 256

""" Default number of abscissae of a density table """
DEFAULT_DENSITY_POINTS = 1025

""" Number of φ cells of the generic sampler lattice """
DEFAULT_PHI_CELLS = 256

""" Largest sample size accepted by the pairwise oracle """
MAX_ORACLE_SAMPLES = 2000

""" Simpson spacing of the 2-D variance quadratures """
VARIANCE_SPACING = 0.05

""" Default class decay α (r = 2 classes contain a state for α below e^{-2|ξ|}/4 if squeezed, 1/(4 tanh(β/2)) if thermal, 1/4 otherwise) """
DEFAULT_ALPHA = 0.2

""" Default class exponent r """
DEFAULT_R = 2.0

""" Default standardisation of the normality check """
DEFAULT_VARIANCE = "asymptotic"

""" Default sampling method """
DEFAULT_METHOD = "auto"
