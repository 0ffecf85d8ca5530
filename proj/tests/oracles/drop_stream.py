"""Episodes (exec seeds 0..39) whose grasp is dropped at p_exec = 0.3."""
from rng_oracle import Rng, mix_seed

dropped = [i for i in range(40) if Rng(mix_seed(i, "execution")).bernoulli(0.3)]
print(" ".join(map(str, dropped)))
