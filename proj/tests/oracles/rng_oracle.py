"""Pure-Python re-implementation of the seeded streams (splitmix64, FNV-1a,
mt19937_64 and the Rng mappings). Used to derive frozen fixtures
independently of the C++ code."""

M64 = (1 << 64) - 1


def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & M64
    return x ^ (x >> 31)


def hash_string(s):
    h = 0xCBF29CE484222325
    for c in s.encode() if isinstance(s, str) else s:
        h ^= c
        h = (h * 0x100000001B3) & M64
    return h


def mix_seed(a, b):
    if isinstance(b, (str, bytes)):
        b = hash_string(b)
    return splitmix64(a ^ splitmix64((b + 0x632BE59BD9B4E019) & M64))


class MT19937_64:
    NN, MM = 312, 156
    A = 0xB5026F5AA96619E9
    UM, LM = 0xFFFFFFFF80000000, 0x7FFFFFFF

    def __init__(self, seed):
        self.mt = [0] * self.NN
        self.mt[0] = seed & M64
        for i in range(1, self.NN):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & M64
        self.mti = self.NN

    def next(self):
        if self.mti >= self.NN:
            mt = self.mt
            for i in range(self.NN):
                x = (mt[i] & self.UM) | (mt[(i + 1) % self.NN] & self.LM)
                xa = x >> 1
                if x & 1:
                    xa ^= self.A
                mt[i] = mt[(i + self.MM) % self.NN] ^ xa
            self.mti = 0
        x = self.mt[self.mti]
        self.mti += 1
        x ^= (x >> 29) & 0x5555555555555555
        x ^= (x << 17) & 0x71D67FFFEDA60000
        x ^= (x << 37) & 0xFFF7EEE000000000
        x ^= x >> 43
        return x & M64


class Rng:
    def __init__(self, seed):
        self.e = MT19937_64(seed)

    def uniform(self, lo=0.0, hi=1.0):
        u = (self.e.next() >> 11) * 2.0 ** -53
        return lo + (hi - lo) * u

    def bernoulli(self, p):
        return self.uniform() < p
