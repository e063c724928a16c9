from decimal import Decimal

# COIN_DIGITS is the number of fractional digits a coin amount carries.
COIN_DIGITS = 6

# COIN_QUANTUM is the smallest representable coin amount
COIN_QUANTUM = Decimal(1).scaleb(-COIN_DIGITS)

# DEFAULT_TARGET_WORKERS is the worker count the job market needs to stay stable
DEFAULT_TARGET_WORKERS = 250

# DEFAULT_INITIAL_WORKERS is the worker count the network starts with
DEFAULT_INITIAL_WORKERS = 100

# DEFAULT_INITIAL_REWARD is the per-job worker reward at step 0 (coin units).
DEFAULT_INITIAL_REWARD = 100.0

# DEFAULT_ALPHA is the sensitivity of the reward to the worker disparity
DEFAULT_ALPHA = 0.2

# DEFAULT_DELTA is the dead band: relative disparities below it leave the reward unchanged
DEFAULT_DELTA = 0.05

# DEFAULT_BETA is the workers' sensitivity to reward variations
DEFAULT_BETA = 1.0

# DEFAULT_GAMMA is the relative range of the random fluctuation in the worker count
DEFAULT_GAMMA = 0.05

# DEFAULT_STEPS is the number of simulation steps of one run
DEFAULT_STEPS = 200

# WORKER_CAP_FACTOR multiplies the target worker count when no explicit cap is configured
WORKER_CAP_FACTOR = 10

# REWARD_FLOOR keeps the multiplicative reward update away from zero under sustained oversupply
REWARD_FLOOR = 1e-6

# DEFAULT_COORDINATOR_FEE is the share of the escrow the market coordinator keeps
DEFAULT_COORDINATOR_FEE = 0.1

# DEFAULT_STAKE_CAP is the maximum stake counted toward a validator selection weight
DEFAULT_STAKE_CAP = Decimal(1000)

# DEFAULT_UNIFORM_BLEND mixes uniform odds into the stake-proportional ones
DEFAULT_UNIFORM_BLEND = 0.2

# DEFAULT_VALIDATORS_PER_TASK must be odd so that a majority always exists
DEFAULT_VALIDATORS_PER_TASK = 3

# DEFAULT_QUALITY_THRESHOLD is the observed quality a validator needs to approve an output
DEFAULT_QUALITY_THRESHOLD = 0.6

# DEFAULT_REPUTATION_THRESHOLD gates job posting, task access and validator eligibility
DEFAULT_REPUTATION_THRESHOLD = 0.3

# REPUTATION_RETENTION is the weight the previous reputation keeps on every event
REPUTATION_RETENTION = 0.9

# REPUTATION_EVENT_WEIGHT is the weight of the new event score; RETENTION + EVENT_WEIGHT must sum to exactly 1.0
REPUTATION_EVENT_WEIGHT = 0.1

# INITIAL_REPUTATION is the score every fresh node starts with
INITIAL_REPUTATION = 1.0

# DEFAULT_QUALITY_NOISE is the half-width of the uniform noise around a worker skill
DEFAULT_QUALITY_NOISE = 0.1

# DEFAULT_OBSERVATION_NOISE is the half-width of the uniform noise on a validator's reading
DEFAULT_OBSERVATION_NOISE = 0.05

# DEFAULT_SKILL_LOW / DEFAULT_SKILL_HIGH bound the uniform skill draw of a fresh worker
DEFAULT_SKILL_LOW = 0.5
DEFAULT_SKILL_HIGH = 1.0

# DEFAULT_VALIDITY_PERIOD is the number of steps a posted job stays available
DEFAULT_VALIDITY_PERIOD = 5

# DEFAULT_RUNTIME_REQUIREMENT is one step: a normalized job takes one worker one step
DEFAULT_RUNTIME_REQUIREMENT = 1

DEFAULT_PUBLIC_GOOD_SHARE = 0.1
DEFAULT_FRAUD_RATE = 0.01
DEFAULT_NUM_POSTERS = 10
DEFAULT_NUM_COORDINATORS = 3
DEFAULT_INITIAL_VALIDATORS = 10
DEFAULT_INITIAL_VALIDATOR_STAKE = Decimal(100)
DEFAULT_POSTER_ENDOWMENT = Decimal(1_000_000)
DEFAULT_SUBSIDY_POOL = Decimal(1_000_000)

# DEFAULT_STAKE_FRACTION is the share of each validated payout a worker stakes
DEFAULT_STAKE_FRACTION = 0.5

# DEFAULT_STEPS_PER_HOUR maps simulation steps to wall time (one step = one hour)
DEFAULT_STEPS_PER_HOUR = 1.0

# JOULES_PER_KWH is the only conversion factor between joules and kilowatt-hours
JOULES_PER_KWH = 3.6e6

# SECONDS_PER_HOUR is used to turn a power draw into energy per hour
SECONDS_PER_HOUR = 3600

# ANTMINER_HASH_RATE is the hash rate of a Bitmain Antminer S21 Pro (hashes/second)
ANTMINER_HASH_RATE = 234e12

# ANTMINER_ENERGY_PER_HASH is the energy efficiency of the same miner (joules/hash)
ANTMINER_ENERGY_PER_HASH = 15e-12

# VALIDATOR_POWER_W is the power draw of a PoS validator node
VALIDATOR_POWER_W = 100.0

# WORKER_POWER_W is the total active power of an AI worker (GPU plus host)
WORKER_POWER_W = 500.0

# SUMMARY_WINDOW is the [start, stop) step window summarized by a sweep
SUMMARY_WINDOW = (100, 200)
