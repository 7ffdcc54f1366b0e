# %% [markdown]
# # Bounded drivers: the three reference scenarios
#
# With |lam| <= c the range shrinks. Its boundary is glued from a piece of the
# unrestricted oval (L1), sweeps of switched drivers (L3, or L5/L7/L9 when the
# driver saturates at +c), a top curve from mixing the two extreme drivers
# (L2), and mirror images.

# %%
from pathlib import Path

from loewner_range import assemble_boundary
from loewner_range.export import curve_rows, write_csv, write_svg

out = Path("demo_output")
out.mkdir(exist_ok=True)

scenarios = {"wide": (0.245, 1.0), "narrow": (0.245, 0.1), "crescent": (0.247, 0.05)}
for name, (T, c) in scenarios.items():
    b = assemble_boundary(T, c)
    ids = " ".join(cv.id for cv in b.curves)
    print(f"{name:8s} T={T} c={c}: case {b.case_tag}, Y0={b.Y0:.6f}, p0={b.p0:.6f}, curves {ids}")
    (out / f"{name}.csv").write_text(write_csv(curve_rows(b.curves)))
    (out / f"{name}.svg").write_text(write_svg(b.curves, f"T={T}, c={c}", [f"case {b.case_tag}"]))

# %% [markdown]
# In the crescent scenario the driver -c, then x - p, overshoots +c for
# offsets between p1 and p2. Those drivers are clamped at +c, which produces L7.

# %%
b = assemble_boundary(0.247, 0.05)
print(f"p1={b.p1:.7f}  p2={b.p2:.7f}")
top = [cv for cv in b.curves if cv.id == "L2"][0]
print(f"lowest point of the top curve: Y={top.Y.min():.4f}")
