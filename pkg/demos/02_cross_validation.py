"""Stratified 10-fold cross-validation of both classifiers.

Runs naive Bayes and the linear SVM on identical fold assignments, prints the
full text report for naive Bayes, then sweeps ten seeds to show how fold
shuffling moves the accuracy of each model.
"""
import numpy as np

from setcast import cli
from setcast import dataset as ds
from setcast import evaluation as ev

data = ds.load_samples(cli.default_data_path())
nb_learner = ev.NaiveBayesLearner()
svm_learner = ev.SvmLearner()

report, folds = ev.cross_validate(data, nb_learner, k=10, seed=1)
print(f"naive Bayes, 10 folds, seed 1 (fold digest {folds.digest()}):\n")
print(ev.render_text(report))

print("seed sweep (accuracy per seed):")
print(f"{'seed':>6s}{'naive Bayes':>14s}{'linear SVM':>14s}")
nb_accs, svm_accs = [], []
for seed in range(10):
    nb_report, nb_folds = ev.cross_validate(data, nb_learner, 10, seed)
    svm_report, svm_folds = ev.cross_validate(data, svm_learner, 10, seed)
    assert nb_folds.digest() == svm_folds.digest()  # identical partitions
    nb_accs.append(nb_report.accuracy)
    svm_accs.append(svm_report.accuracy)
    print(f"{seed:6d}{nb_report.accuracy:14.4f}{svm_report.accuracy:14.4f}")
print(f"{'mean':>6s}{np.mean(nb_accs):14.4f}{np.mean(svm_accs):14.4f}")
