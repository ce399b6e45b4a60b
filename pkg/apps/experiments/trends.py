"""Trend verdicts over a recipe's tables.

Every check works on median-over-seeds values so a single unlucky seed does
not flip a verdict. Checks that the recipe cannot answer (no ZF arm, a single
pretrain AF, no fine-tune checkpoints) come back as ``None``.
"""
import numpy as np

BASELINES = ("ZF", "CGSENSE")
GROUND_TRUTH = "GroundTruth"
TUNED_PREFIX = "TL_af"
ZERO_SHOT_PREFIX = "ZeroShot_af"
ZF_MARGIN_DB = 3.0
TRANSFER_MARGIN_DB = 0.2
GAIN_FRACTION = 0.95
FAST_CHECKPOINT_SHARE = 0.25


def af_label(af):
    return f"{af:g}"


def _filled(rows, key):
    return [row for row in rows if row.get(key, "") != ""]


def median_by_arm(rows, key):
    """Median of ``key`` per arm, skipping rows where it is empty."""
    medians = {}
    for arm in sorted({row["arm"] for row in _filled(rows, key)}):
        values = [row[key] for row in _filled(rows, key) if row["arm"] == arm]
        medians[arm] = float(np.median(values))
    return medians


def training_beats_zf(medians, margin=ZF_MARGIN_DB):
    """Best trained arm against the zero-filled baseline."""
    trained = {
        arm: value
        for arm, value in medians.items()
        if arm not in BASELINES and arm != GROUND_TRUTH
    }
    if "ZF" not in medians or not trained:
        return None
    best = max(sorted(trained), key=trained.get)
    gap = trained[best] - medians["ZF"]
    return {"arm": best, "margin_db": gap, "passed": bool(gap >= margin)}


def transfer_helps(medians, margin=TRANSFER_MARGIN_DB):
    """Every fine-tuned arm against Directly Trained and its own zero-shot model."""
    verdicts = {}
    for arm in sorted(medians):
        if not arm.startswith(TUNED_PREFIX):
            continue
        tag = arm[len(TUNED_PREFIX) :]
        gaps = {
            other: medians[arm] - medians[other]
            for other in ("DirectlyTrained", ZERO_SHOT_PREFIX + tag)
            if other in medians
        }
        passed = bool(gaps) and all(gap >= margin for gap in gaps.values())
        verdicts[arm] = {"margin_db": gaps, "passed": passed}
    return verdicts or None


def checkpoint_share(trace, fraction=GAIN_FRACTION):
    """Share of fine-tune checkpoints needed to reach ``fraction`` of the final gain.

    ``trace`` holds (epoch, psnr) pairs; epoch 0 is the model before
    fine-tuning. ``None`` when there are no checkpoints or no gain.
    """
    trace = sorted(trace)
    if len(trace) < 2 or trace[0][0] != 0:
        return None
    start = trace[0][1]
    checkpoints = [value for _, value in trace[1:]]
    gain = checkpoints[-1] - start
    if not gain > 0:
        return None
    for count, value in enumerate(checkpoints, start=1):
        if value - start >= fraction * gain:
            return count / len(checkpoints)
    return 1.0


def convergence_speed(rows, share=FAST_CHECKPOINT_SHARE):
    """Median checkpoint share per fine-tuned arm and whether it is fast."""
    traces = {}
    for row in rows:
        key = (row["arm"], row["seed"])
        traces.setdefault(key, []).append((row["epoch"], row["psnr_mean"]))
    shares = {}
    for (arm, _), trace in sorted(traces.items()):
        shares.setdefault(arm, []).append(checkpoint_share(trace))
    verdicts = {}
    for arm, values in shares.items():
        known = [value for value in values if value is not None]
        median = float(np.median(known)) if known else None
        verdicts[arm] = {
            "checkpoint_share": median,
            "passed": median is not None and median <= share,
        }
    return verdicts or None


def af_transfer(medians):
    """Lowest-AF pretraining against the highest after fine-tuning to one AF."""
    tuned = {}
    for arm, value in medians.items():
        if arm.startswith(TUNED_PREFIX):
            tag = arm[len(TUNED_PREFIX) :]
            tuned[float(tag)] = (tag, value)
    if len(tuned) < 2:
        return None
    low, high = min(tuned), max(tuned)
    gap = tuned[low][1] - tuned[high][1]
    beats_zero_shot = all(
        value >= medians[ZERO_SHOT_PREFIX + tag]
        for tag, value in tuned.values()
        if ZERO_SHOT_PREFIX + tag in medians
    )
    return {
        "lowest_af": low,
        "highest_af": high,
        "margin_db": gap,
        "passed": bool(gap >= 0),
        "finetuning_beats_zero_shot": beats_zero_shot,
    }


def recipe_trends(comparison, convergence):
    medians = median_by_arm(comparison, "psnr_mean")
    return {
        "training_beats_zf": training_beats_zf(medians),
        "transfer_helps": transfer_helps(medians),
        "convergence": convergence_speed(convergence),
        "af_transfer": af_transfer(medians),
    }


def roi_moments_summary(comparison):
    """Median ROI kurtosis/skewness per arm and the arm closest to the ground truth."""
    kurtosis = median_by_arm(comparison, "kurtosis_mean")
    skewness = median_by_arm(comparison, "skewness_mean")
    arms = {
        arm: {"kurtosis": kurtosis[arm], "skewness": skewness[arm]}
        for arm in sorted(set(kurtosis) & set(skewness))
    }
    if not arms:
        return None
    summary = {"arms": arms, "closest_to_ground_truth": None}
    reference = arms.get(GROUND_TRUTH)
    others = [arm for arm in arms if arm != GROUND_TRUTH]
    if reference is not None and others:

        def distance(arm):
            moments = arms[arm]
            return sum(abs(moments[name] - reference[name]) for name in moments)

        summary["closest_to_ground_truth"] = min(others, key=distance)
    return summary
