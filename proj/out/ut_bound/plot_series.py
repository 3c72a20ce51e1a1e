# Plots the diagnostics series of one run.
import sys
import pandas as pd
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "series.csv"
df = pd.read_csv(path)
fig, axes = plt.subplots(2, 2, figsize=(10, 7))
axes[0, 0].semilogy(df.t, df.mass.clip(lower=1e-300))
axes[0, 0].set_title("mass ||u||^2")
axes[0, 1].semilogy(df.t, df.lmp1.clip(lower=1e-300))
axes[0, 1].set_title("||u||_{m+1}^{m+1}")
axes[1, 0].plot(df.t, df.h1, label="H1")
axes[1, 0].plot(df.t, df.h2, label="H2")
axes[1, 0].legend()
axes[1, 0].set_title("Sobolev norms")
axes[1, 1].plot(df.t, df.source_work)
axes[1, 1].set_title("Im int f conj(u)")
for ax in axes.flat:
    ax.set_xlabel("t")
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=120)
