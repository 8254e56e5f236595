"""Confusion matrix and the full binary-classification statistics report:
per-class rates (sensitivity, specificity, precision, F-scores, AGF, AUC)
and overall agreement statistics (accuracy with normal-approximation CI,
Cohen's kappa with SE and strength-of-agreement labels, entropies).

Undefined ratios (zero denominators) are reported as None and rendered as
"undefined", never silently as 0.
"""

import math
from dataclasses import dataclass
from pathlib import Path

__all__ = [
    "ConfusionMatrix", "ClassStats", "OverallStats",
    "LengthMismatchError", "BadLabelError",
    "build_confusion", "class_stats", "overall_stats", "render_report",
    "f_beta", "auc_balanced", "adjusted_f_score", "confidence_interval",
    "soa_labels", "OVERALL_MERITS", "CLASS_MERITS",
]

Z_95 = 1.96

OVERALL_MERITS = (
    "95% CI", "Train Accuracy", "Test Accuracy", "F1 Macro", "F1 Micro",
    "Hamming Loss", "Reference Entropy", "Response Entropy",
    "Standard Error", "Kappa", "Kappa Standard Error",
    "SOA1(Landis & Koch)", "SOA2(Fleiss)", "SOA3(Altman)",
)

CLASS_MERITS = (
    "AGF(Adjusted F-score)", "AUC(Area under the ROC curve)",
    "ERR(Error rate)", "FNR", "FPR", "Sensitivity", "Specificity",
    "Precision", "F1-Score",
)


class LengthMismatchError(ValueError):
    """true and predicted label sequences differ in length."""


class BadLabelError(ValueError):
    """A label outside {0, 1} was supplied."""


@dataclass(frozen=True)
class ConfusionMatrix:
    """2x2 counts; rows are true class (0 suicide, 1 non-suicide), columns
    are predicted class."""

    counts: tuple  # ((tp0, fn0), (fp0, tn0)) viewed from class 0

    def __post_init__(self):
        c = self.counts
        if len(c) != 2 or any(len(row) != 2 for row in c):
            raise ValueError("counts must be 2x2")
        if any(v < 0 for row in c for v in row):
            raise ValueError("counts must be non-negative")
        if self.n == 0:
            raise ValueError("confusion matrix must contain at least one sample")

    @property
    def n(self) -> int:
        return sum(v for row in self.counts for v in row)

    def __getitem__(self, ij):
        i, j = ij
        return self.counts[i][j]

    def scaled(self, k: int) -> "ConfusionMatrix":
        return ConfusionMatrix(tuple(tuple(v * k for v in row) for row in self.counts))


def build_confusion(true_labels, predicted_labels) -> ConfusionMatrix:
    true_labels = list(true_labels)
    predicted_labels = list(predicted_labels)
    if len(true_labels) != len(predicted_labels):
        raise LengthMismatchError(
            f"{len(true_labels)} true vs {len(predicted_labels)} predicted")
    if not true_labels:
        raise LengthMismatchError("need at least one sample")
    counts = [[0, 0], [0, 0]]
    for t, p in zip(true_labels, predicted_labels):
        if t not in (0, 1) or p not in (0, 1):
            raise BadLabelError(f"labels must be 0 or 1, got ({t}, {p})")
        counts[t][p] += 1
    return ConfusionMatrix((tuple(counts[0]), tuple(counts[1])))


def _ratio(num, den):
    return None if den == 0 else num / den


def f_beta(precision, recall, beta: float = 1.0):
    """F-beta score; None when either input is undefined or both are 0."""
    if precision is None or recall is None:
        return None
    b2 = beta * beta
    den = b2 * precision + recall
    if den == 0:
        return None
    return (1 + b2) * precision * recall / den


def auc_balanced(tpr, tnr):
    """AUC of a hard classifier: balanced accuracy (TPR + TNR) / 2."""
    if tpr is None or tnr is None:
        return None
    return (tpr + tnr) / 2


def adjusted_f_score(precision, recall, npv, tnr):
    """AGF: geometric mean of F2 and the label-swapped F0.5 (which uses
    NPV as precision and TNR as recall)."""
    f2 = f_beta(precision, recall, 2.0)
    inv_f05 = f_beta(npv, tnr, 0.5)
    if f2 is None or inv_f05 is None:
        return None
    return math.sqrt(f2 * inv_f05)


def confidence_interval(accuracy: float, standard_error: float):
    """Normal-approximation 95% interval: accuracy +/- 1.96 * SE."""
    return (accuracy - Z_95 * standard_error, accuracy + Z_95 * standard_error)


def soa_labels(kappa):
    """(Landis & Koch, Fleiss, Altman) strength-of-agreement labels."""
    if kappa is None:
        return ("undefined", "undefined", "undefined")
    return (_soa_landis_koch(kappa), _soa_fleiss(kappa), _soa_altman(kappa))


@dataclass(frozen=True)
class ClassStats:
    sensitivity: float | None
    specificity: float | None
    precision: float | None
    f1: float | None
    fnr: float | None
    fpr: float | None
    err: float
    auc: float | None
    agf: float | None


def class_stats(cm: ConfusionMatrix):
    """Per-class statistics, one ClassStats per class in (class0, class1)."""
    out = []
    for c in (0, 1):
        o = 1 - c
        tp = cm[c, c]
        fn = cm[c, o]
        fp = cm[o, c]
        tn = cm[o, o]
        tpr = _ratio(tp, tp + fn)
        tnr = _ratio(tn, tn + fp)
        precision = _ratio(tp, tp + fp)
        npv = _ratio(tn, tn + fn)
        out.append(ClassStats(
            sensitivity=tpr,
            specificity=tnr,
            precision=precision,
            f1=f_beta(precision, tpr, 1.0),
            fnr=None if tpr is None else 1 - tpr,
            fpr=None if tnr is None else 1 - tnr,
            err=(fp + fn) / cm.n,
            auc=auc_balanced(tpr, tnr),
            agf=adjusted_f_score(precision, tpr, npv, tnr),
        ))
    return tuple(out)


def _entropy_bits(p0: float, p1: float) -> float:
    h = 0.0
    for p in (p0, p1):
        if p > 0:
            h -= p * math.log2(p)
    return h


def _soa_landis_koch(kappa: float) -> str:
    if kappa < 0:
        return "Poor"
    if kappa <= 0.20:
        return "Slight"
    if kappa <= 0.40:
        return "Fair"
    if kappa <= 0.60:
        return "Moderate"
    if kappa <= 0.80:
        return "Substantial"
    return "Almost Perfect"


def _soa_fleiss(kappa: float) -> str:
    if kappa < 0.40:
        return "Poor"
    if kappa <= 0.75:
        return "Intermediate to Good"
    return "Excellent"


def _soa_altman(kappa: float) -> str:
    if kappa < 0.2:
        return "Poor"
    if kappa < 0.4:
        return "Fair"
    if kappa < 0.6:
        return "Moderate"
    if kappa < 0.8:
        return "Good"
    return "Very Good"


@dataclass(frozen=True)
class OverallStats:
    accuracy: float
    f1_macro: float | None
    f1_micro: float
    hamming_loss: float
    kappa: float | None
    kappa_se: float | None
    standard_error: float
    ci95: tuple
    reference_entropy: float
    response_entropy: float
    soa1_landis_koch: str
    soa2_fleiss: str
    soa3_altman: str


def overall_stats(cm: ConfusionMatrix) -> OverallStats:
    n = cm.n
    if n < 2:
        raise ValueError("need n >= 2 for overall statistics")
    po = (cm[0, 0] + cm[1, 1]) / n
    row0 = cm[0, 0] + cm[0, 1]
    row1 = cm[1, 0] + cm[1, 1]
    col0 = cm[0, 0] + cm[1, 0]
    col1 = cm[0, 1] + cm[1, 1]
    pe = (row0 * col0 + row1 * col1) / (n * n)
    if pe == 1.0:
        kappa = None
        kappa_se = None
    else:
        kappa = (po - pe) / (1 - pe)
        kappa_se = math.sqrt(po * (1 - po) / (n * (1 - pe) ** 2))
    se = math.sqrt(po * (1 - po) / n)
    stats0, stats1 = class_stats(cm)
    if stats0.f1 is None or stats1.f1 is None:
        f1_macro = None
    else:
        f1_macro = (stats0.f1 + stats1.f1) / 2
    soa1, soa2, soa3 = soa_labels(kappa)
    return OverallStats(
        accuracy=po,
        f1_macro=f1_macro,
        f1_micro=po,
        hamming_loss=1 - po,
        kappa=kappa,
        kappa_se=kappa_se,
        standard_error=se,
        ci95=confidence_interval(po, se),
        reference_entropy=_entropy_bits(row0 / n, row1 / n),
        response_entropy=_entropy_bits(col0 / n, col1 / n),
        soa1_landis_koch=soa1,
        soa2_fleiss=soa2,
        soa3_altman=soa3,
    )


def _fmt(value) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, str):
        return value
    return f"{value:.5f}"


def _overall_rows(overall: OverallStats, train_accuracy) -> list:
    ci = f"({_fmt(overall.ci95[0])}, {_fmt(overall.ci95[1])})"
    values = (
        ci, train_accuracy, overall.accuracy, overall.f1_macro,
        overall.f1_micro, overall.hamming_loss, overall.reference_entropy,
        overall.response_entropy, overall.standard_error, overall.kappa,
        overall.kappa_se, overall.soa1_landis_koch, overall.soa2_fleiss,
        overall.soa3_altman,
    )
    return [(merit, _fmt(value)) for merit, value in zip(OVERALL_MERITS, values)]


def _class_rows(stats0: ClassStats, stats1: ClassStats) -> list:
    fields = ("agf", "auc", "err", "fnr", "fpr",
              "sensitivity", "specificity", "precision", "f1")
    return [
        (merit, _fmt(getattr(stats0, name)), _fmt(getattr(stats1, name)))
        for merit, name in zip(CLASS_MERITS, fields)
    ]


def render_report(cls_stats, overall: OverallStats, cm: ConfusionMatrix,
                  out_dir: str | Path, train_accuracy: float | None = None) -> str:
    """Write overall_stats.csv, class_stats.csv, confusion_matrix.csv and a
    combined plain-text report into out_dir; returns the report text.

    Output is deterministic: identical inputs give byte-identical files.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stats0, stats1 = cls_stats
    overall_rows = _overall_rows(overall, train_accuracy)
    class_rows = _class_rows(stats0, stats1)

    with open(out_dir / "overall_stats.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("merit,value\n")
        for merit, value in overall_rows:
            fh.write(f'"{merit}","{value}"\n')

    with open(out_dir / "class_stats.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("merit,suicide,non-suicide\n")
        for merit, v0, v1 in class_rows:
            fh.write(f'"{merit}",{v0},{v1}\n')

    with open(out_dir / "confusion_matrix.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("true\\predicted,suicide,non-suicide\n")
        fh.write(f"suicide,{cm[0, 0]},{cm[0, 1]}\n")
        fh.write(f"non-suicide,{cm[1, 0]},{cm[1, 1]}\n")

    width = max(len(m) for m in OVERALL_MERITS + CLASS_MERITS) + 2
    lines = ["Overall statistics", "-" * 19]
    for merit, value in overall_rows:
        lines.append(f"{merit:<{width}}{value}")
    lines += ["", "Class statistics (suicide / non-suicide)", "-" * 40]
    for merit, v0, v1 in class_rows:
        lines.append(f"{merit:<{width}}{v0} / {v1}")
    lines += [
        "",
        "Confusion matrix (rows: true, columns: predicted)",
        "-" * 50,
        f"{'':<14}{'suicide':>12}{'non-suicide':>14}",
        f"{'suicide':<14}{cm[0, 0]:>12}{cm[0, 1]:>14}",
        f"{'non-suicide':<14}{cm[1, 0]:>12}{cm[1, 1]:>14}",
        "",
    ]
    text = "\n".join(lines)
    (out_dir / "report.txt").write_text(text, encoding="utf-8")
    return text
