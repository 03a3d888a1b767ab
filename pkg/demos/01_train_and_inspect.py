"""Train the naive Bayes classifier on the bundled dataset and inspect it.

Shows the class priors, the per-attribute Gaussian parameters the model
estimated for each class, and a few classified samples with their posterior
distributions.
"""
import numpy as np

from setcast import cli
from setcast import dataset as ds
from setcast import naive_bayes as nb

data = ds.load_samples(cli.default_data_path())
print(f"dataset: {len(data)} samples, class counts {data.class_counts()}")

model = nb.train(data)
print("\npriors: " + ", ".join(
    f"P({c}) = {p:.4f}" for c, p in zip(ds.CLASS_LABELS, model.priors)
))

print("\nper-attribute Gaussian parameters (mu, sigma):")
print(f"{'attribute':>10s}" + "".join(f"{c:>22s}" for c in ds.CLASS_LABELS))
for ai, attr in enumerate(ds.ATTRIBUTE_NAMES):
    cells = []
    for ci in range(len(ds.CLASS_LABELS)):
        g = model.gaussians[(ci, ai)]
        cells.append(f"({g.mu:8.4f}, {g.sigma:7.4f})")
    print(f"{attr:>10s}" + "".join(f"{c:>22s}" for c in cells))

print("\nsample classifications (first five rows):")
for x, actual in list(zip(data.features, data.labels))[:5]:
    dist = nb.predict_distribution(model, x)
    label = nb.classify(model, x)
    flag = "ok " if label == actual else "MISS"
    print(f"  {flag}  predicted {label:>4s} (actual {actual:>4s})  "
          f"P(UP) = {dist[0]:.4f}  P(DOWN) = {dist[1]:.4f}")

correct = sum(nb.classify(model, x) == lab
              for x, lab in zip(data.features, data.labels))
print(f"\nresubstitution accuracy: {correct}/{len(data)} "
      f"= {100 * correct / len(data):.1f}%")
