# %% [markdown]
# # Value range without a bound on the driver
#
# Start the Loewner flow at i and let the driver be anything. At time T < 1/4
# the endpoint g(i, T) fills an oval between i and i*sqrt(1 - 4T). Its right
# half satisfies 2 X^2 = log(Y) (1 - 4T - Y^2).

# %%
import math

import numpy as np

from loewner_range import (DrivingFunction, ExtremalFollow, integrate_phase,
                           theorem1_point, unrestricted_boundary)
from loewner_range.curves import oval_residual

T = 0.245
right = unrestricted_boundary(T)
print(f"{len(right)} samples, Y from {right.Y[0]:.6f} to {right.Y[-1]:.1f}")
print("widest point:", right.xy[np.argmax(right.X)])

# %% [markdown]
# Every boundary point comes from a driver that keeps a constant offset from
# the real part of the trajectory, lam(t) = x(t) - p. Recover p from a sample
# and integrate that driver.

# %%
k = len(right) // 2
X, Y = right.X[k], right.Y[k]
p = -X / math.log(Y)
end = integrate_phase(DrivingFunction(((T, ExtremalFollow(p)),)), T)
print(f"offset p={p:.6f}: curve ({X:.9f}, {Y:.9f})  flow ({end.x:.9f}, {end.y:.9f})")

# %% [markdown]
# A second description uses an angle phi in (-pi/2, pi/2). Both must agree.

# %%
phis = np.linspace(-1.5, 1.5, 7)
for phi in phis:
    pt = theorem1_point(float(phi), T)
    print(f"phi={phi:+.2f}  X={pt.X:.6f}  Y={pt.Y:.6f}  residual={oval_residual(pt.X, pt.Y, T):+.1e}")
