"""End-to-end diagnosis pipeline and its file-level plumbing.

The flow: load a priority-ordered database manifest, adopt a normal
reference gene by homology search gated on GC content (falling back across
databases until one passes), write the combined normal+patient FASTA, align
and call mutations, classify each mutation's protein effect, score the
malignant candidates with the neural classifier, and render a diagnosis
report. Also hosts the deterministic synthetic corpus generator that stands
in for the unpublished clinical datasets.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .align import (
    AlignmentResult,
    Mutation,
    MutationKind,
    Scoring,
    apply_mutations,
    call_mutations,
    global_align,
)
from .errors import MutascanError
from .homology import (
    HomologyHit,
    SearchParams,
    build_index,
    format_hit_table,
    hit_to_dict,
    search,
)
from .neural import (
    Label,
    Network,
    NetworkTopology,
    TrainConfig,
    classify,
    encode,
    load_net,
    load_training_rows,
    rows_to_samples,
    save_net,
    train,
)
from .protein import ProteinEffect, classify_effect, is_malignant_candidate
from .seqio import DnaSequence, FastaFile, read_fasta_path, write_fasta_path
from .seqstats import (
    GC_GATE_TARGET,
    GC_GATE_TOLERANCE,
    AllAmbiguousError,
    GateVerdict,
    composition,
    gc_gate,
)

DEFAULT_WORKDIR = "mutascan-work"
WORKDIR_ENV_VAR = "MUTASCAN_WORKDIR"


class PipelineError(MutascanError):
    pass


class ManifestError(PipelineError):
    pass


class MultiRecordPatientFileError(PipelineError):
    pass


class MissingModelAndTrainingDataError(PipelineError):
    pass


class NoDatabaseAcceptedError(PipelineError):
    pass


class IoFailureError(PipelineError):
    pass


@dataclass(frozen=True)
class DatabaseEntry:
    name: str
    fasta_path: Path
    cds: dict[str, tuple[int, int]]  # record id -> 1-based inclusive CDS bounds


@dataclass(frozen=True)
class DatabaseManifest:
    databases: tuple[DatabaseEntry, ...]
    training_data_path: Path | None
    model_path: Path | None


@dataclass(frozen=True)
class AdoptedReference:
    database_name: str
    subject: DnaSequence
    cds_start: int
    cds_end: int
    verdict: GateVerdict
    top_hit: HomologyHit


@dataclass(frozen=True)
class RejectedReference:
    database_name: str
    verdict: GateVerdict | None
    reason: str


@dataclass(frozen=True)
class CandidateCall:
    mutation: Mutation
    score: float
    label: Label


@dataclass(frozen=True)
class DiagnosisReport:
    patient_id: str
    adopted: AdoptedReference
    rejected: tuple[RejectedReference, ...]
    alignment: AlignmentResult
    mutations: tuple[Mutation, ...]
    malignant_candidates: tuple[Mutation, ...]
    classifications: tuple[CandidateCall, ...]
    overall_label: Label
    tool_versions: dict
    config: dict


def load_manifest(path: str | Path) -> DatabaseManifest:
    """Read and validate a manifest; paths resolve relative to its directory."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("databases"), list):
        raise ManifestError(f"manifest {path} must have a 'databases' list")
    if not doc["databases"]:
        raise ManifestError("manifest lists no databases")

    base = path.parent
    entries: list[DatabaseEntry] = []
    for i, raw in enumerate(doc["databases"]):
        if not isinstance(raw, dict) or "name" not in raw or "fasta" not in raw:
            raise ManifestError(f"database entry {i} needs 'name' and 'fasta'")
        fasta_path = base / raw["fasta"]
        if not fasta_path.is_file():
            raise ManifestError(
                f"database '{raw['name']}': FASTA not readable: {fasta_path}"
            )
        cds: dict[str, tuple[int, int]] = {}
        for rec_id, bounds in (raw.get("cds") or {}).items():
            if (
                not isinstance(bounds, (list, tuple))
                or len(bounds) != 2
                or not all(isinstance(b, int) for b in bounds)
                or not (1 <= bounds[0] <= bounds[1])
            ):
                raise ManifestError(
                    f"database '{raw['name']}': bad CDS bounds for '{rec_id}'"
                )
            cds[rec_id] = (bounds[0], bounds[1])
        entries.append(DatabaseEntry(str(raw["name"]), fasta_path, cds))

    training = doc.get("training_data")
    model = doc.get("model")
    return DatabaseManifest(
        tuple(entries),
        base / training if training else None,
        base / model if model else None,
    )


def adopt_reference(
    patient: DnaSequence,
    manifest: DatabaseManifest,
    params: SearchParams = SearchParams(),
    gate_target: float = GC_GATE_TARGET,
    gate_tolerance: float = GC_GATE_TOLERANCE,
) -> tuple[AdoptedReference, list[RejectedReference]]:
    """Adopt the first database whose top hit passes the GC gate.

    Databases are consulted strictly in manifest priority order; every
    database consulted before the acceptance is recorded as a rejection
    with its gate verdict (or a no-hits note). Raises NoDatabaseAccepted
    with the full verdict list when every database is exhausted.
    """
    rejections: list[RejectedReference] = []
    for entry in manifest.databases:
        db = read_fasta_path(entry.fasta_path)
        index = build_index(db, params.k)
        hits = search(patient, index, params)
        if not hits:
            rejections.append(
                RejectedReference(entry.name, None, "no hits for the patient query")
            )
            continue
        top = hits[0]
        subject = next(r for r in db if r.id == top.subject_id)
        try:
            stats = composition(subject)
        except AllAmbiguousError:
            rejections.append(
                RejectedReference(entry.name, None, "subject is all-ambiguous")
            )
            continue
        verdict = gc_gate(stats, gate_target, gate_tolerance)
        if not verdict.accepted:
            rejections.append(
                RejectedReference(
                    entry.name,
                    verdict,
                    f"GC {verdict.measured_gc:.1f}% outside "
                    f"{gate_target}% +/- {gate_tolerance}%",
                )
            )
            continue
        if subject.id not in entry.cds:
            raise ManifestError(
                f"adopted reference '{subject.id}' from database "
                f"'{entry.name}' has no CDS annotation"
            )
        cds_start, cds_end = entry.cds[subject.id]
        if cds_end > len(subject):
            raise ManifestError(
                f"CDS end {cds_end} exceeds length of '{subject.id}'"
            )
        return (
            AdoptedReference(entry.name, subject, cds_start, cds_end, verdict, top),
            rejections,
        )
    detail = "; ".join(
        f"{r.database_name}: "
        + (f"GC {r.verdict.measured_gc:.2f}%" if r.verdict else r.reason)
        for r in rejections
    )
    raise NoDatabaseAcceptedError(f"all databases rejected ({detail})")


def resolve_workdir(work_dir: str | Path | None = None) -> Path:
    if work_dir is not None:
        return Path(work_dir)
    return Path(os.environ.get(WORKDIR_ENV_VAR, DEFAULT_WORKDIR))


def _attach_effects(
    muts: list[Mutation], ref: DnaSequence, cds_start: int, cds_end: int
) -> list[Mutation]:
    out = []
    for m in muts:
        effect = classify_effect(m, ref, cds_start, cds_end)
        out.append(Mutation(m.position, m.kind, m.ref_bases, m.alt_bases, effect))
    return out


def _obtain_network(
    manifest: DatabaseManifest,
    model_path: str | Path | None,
    ref: DnaSequence,
    cds_start: int,
    cds_end: int,
    train_config: TrainConfig,
    work_dir: Path,
) -> tuple[Network, dict]:
    """Load the model if one is given, otherwise train from the manifest's data."""
    chosen = Path(model_path) if model_path else manifest.model_path
    if chosen is not None:
        return load_net(chosen), {"model": str(chosen), "trained_here": False}
    if manifest.training_data_path is None:
        raise MissingModelAndTrainingDataError(
            "manifest names no model and no training data; supply --model "
            "or add 'training_data' to the manifest"
        )
    rows = load_training_rows(manifest.training_data_path)
    samples = rows_to_samples(rows, ref, cds_start, cds_end)
    net, report = train(NetworkTopology(), samples, train_config)
    saved = work_dir / "model.json"
    save_net(net, saved)
    return net, {
        "model": str(saved),
        "trained_here": True,
        "epochs_run": report.epochs_run,
        "final_mse": report.final_mse,
        "converged": report.converged,
    }


def run_diagnosis(
    patient_path: str | Path,
    manifest: DatabaseManifest | str | Path,
    model_path: str | Path | None = None,
    work_dir: str | Path | None = None,
    search_params: SearchParams = SearchParams(),
    scoring: Scoring = Scoring(),
    gate_target: float = GC_GATE_TARGET,
    gate_tolerance: float = GC_GATE_TOLERANCE,
    threshold: float = 0.5,
    train_config: TrainConfig = TrainConfig(),
) -> DiagnosisReport:
    """Run the whole diagnosis and write work-directory artifacts.

    Artifacts: combined.fasta (normal + patient), report.txt, report.json,
    and model.json when the classifier is trained on the fly. The overall
    label is AtRisk when any malignant candidate scores at or above the
    threshold; a risk label is a result, not an error.
    """
    if not isinstance(manifest, DatabaseManifest):
        manifest = load_manifest(manifest)
    patient_file = read_fasta_path(patient_path)
    if len(patient_file) != 1:
        raise MultiRecordPatientFileError(
            f"patient file has {len(patient_file)} records, expected exactly 1"
        )
    patient = patient_file.records[0]

    adopted, rejected = adopt_reference(
        patient, manifest, search_params, gate_target, gate_tolerance
    )
    ref = adopted.subject

    wd = resolve_workdir(work_dir)
    try:
        wd.mkdir(parents=True, exist_ok=True)
        combined_patient = patient
        if patient.id == ref.id:
            combined_patient = DnaSequence(
                patient.id + ".patient", patient.description, patient.bases
            )
        write_fasta_path(FastaFile((ref, combined_patient)), wd / "combined.fasta")
    except OSError as exc:
        raise IoFailureError(f"cannot write work directory {wd}: {exc}") from exc

    alignment = global_align(ref, patient, scoring)
    mutations = _attach_effects(
        call_mutations(alignment), ref, adopted.cds_start, adopted.cds_end
    )
    candidates = [m for m in mutations if is_malignant_candidate(m.effect)]

    net, model_info = _obtain_network(
        manifest, model_path, ref, adopted.cds_start, adopted.cds_end,
        train_config, wd,
    )
    calls = []
    for m in candidates:
        label, score = classify(net, encode(m, ref), threshold)
        calls.append(CandidateCall(m, score, label))
    overall = (
        Label.AT_RISK
        if any(c.label is Label.AT_RISK for c in calls)
        else Label.NORMAL
    )

    report = DiagnosisReport(
        patient_id=patient.id,
        adopted=adopted,
        rejected=tuple(rejected),
        alignment=alignment,
        mutations=tuple(mutations),
        malignant_candidates=tuple(candidates),
        classifications=tuple(calls),
        overall_label=overall,
        tool_versions={"mutascan": __version__},
        config={
            "gate_target": gate_target,
            "gate_tolerance": gate_tolerance,
            "threshold": threshold,
            "search_k": search_params.k,
            "scoring": {
                "match": scoring.match,
                "mismatch": scoring.mismatch,
                "gap_open": scoring.gap_open,
                "gap_extend": scoring.gap_extend,
            },
            **model_info,
        },
    )
    try:
        (wd / "report.txt").write_text(render_report(report, "text"), encoding="utf-8")
        (wd / "report.json").write_text(render_report(report, "json"), encoding="utf-8")
    except OSError as exc:
        raise IoFailureError(f"cannot write reports to {wd}: {exc}") from exc
    return report


def _verdict_dict(v: GateVerdict | None) -> dict | None:
    if v is None:
        return None
    return {
        "accepted": v.accepted,
        "measured_gc": v.measured_gc,
        "target": v.target,
        "tolerance": v.tolerance,
        "gene_band_flag": v.gene_band_flag,
    }


def _effect_dict(e: ProteinEffect | None) -> dict | None:
    if e is None:
        return None
    return {"kind": e.kind.value, "ref_aa": e.ref_aa, "alt_aa": e.alt_aa}


def _mutation_dict(m: Mutation) -> dict:
    return {
        "position": m.position,
        "kind": m.kind.value,
        "ref": m.ref_bases,
        "alt": m.alt_bases,
        "effect": _effect_dict(m.effect),
    }


def report_to_dict(report: DiagnosisReport) -> dict:
    return {
        "patient_id": report.patient_id,
        "adopted_reference": {
            "database_name": report.adopted.database_name,
            "subject_id": report.adopted.subject.id,
            "cds_start": report.adopted.cds_start,
            "cds_end": report.adopted.cds_end,
            "gate_verdict": _verdict_dict(report.adopted.verdict),
            "top_hit": hit_to_dict(report.adopted.top_hit),
        },
        "rejected_references": [
            {
                "database_name": r.database_name,
                "gate_verdict": _verdict_dict(r.verdict),
                "reason": r.reason,
            }
            for r in report.rejected
        ],
        "alignment": {
            "score": report.alignment.score,
            "length": len(report.alignment),
            "identity_percent": report.alignment.identity_percent,
            "aligned_reference": report.alignment.aligned_a,
            "aligned_patient": report.alignment.aligned_b,
        },
        "mutations": [_mutation_dict(m) for m in report.mutations],
        "malignant_candidates": [_mutation_dict(m) for m in report.malignant_candidates],
        "classifications": [
            {
                "mutation": _mutation_dict(c.mutation),
                "score": c.score,
                "label": c.label.value,
            }
            for c in report.classifications
        ],
        "overall_label": report.overall_label.value,
        "display": report.overall_label.display,
        "tool_versions": report.tool_versions,
        "config": report.config,
    }


def render_report(report: DiagnosisReport, fmt: str = "text") -> str:
    """Render a diagnosis report as human-readable text or stable JSON."""
    if fmt == "json":
        return json.dumps(report_to_dict(report), indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")

    a = report.adopted
    v = a.verdict
    lines = [
        "mutascan diagnosis report",
        "=" * 25,
        "",
        f"patient: {report.patient_id}",
        "",
        "reference adoption",
        "-" * 18,
    ]
    for r in report.rejected:
        if r.verdict is None:
            lines.append(f"  {r.database_name}: rejected ({r.reason})")
        else:
            band = ", gene band 45-50%" if r.verdict.gene_band_flag else ""
            lines.append(
                f"  {r.database_name}: rejected, GC {r.verdict.measured_gc:.2f}% "
                f"outside {r.verdict.target:.0f}% +/- {r.verdict.tolerance:.0f}%{band}"
            )
    lines.append(
        f"  {a.database_name}: adopted '{a.subject.id}', GC {v.measured_gc:.2f}% "
        f"within {v.target:.0f}% +/- {v.tolerance:.0f}%"
    )
    lines += [
        "",
        "homology top hit",
        "-" * 16,
        format_hit_table([a.top_hit]).rstrip("\n"),
        "",
        "alignment",
        "-" * 9,
        f"  length {len(report.alignment)}, score {report.alignment.score}, "
        f"identity {report.alignment.identity_percent:.2f}%",
        "",
        f"mutations ({len(report.mutations)})",
        "-" * 9,
    ]
    if report.mutations:
        for m in report.mutations:
            effect = m.effect.describe() if m.effect else "unclassified"
            lines.append(f"  {m.describe()}  [{effect}]")
    else:
        lines.append("  none")
    lines += ["", f"malignant candidates ({len(report.malignant_candidates)})", "-" * 20]
    if report.classifications:
        for c in report.classifications:
            lines.append(
                f"  {c.mutation.describe()}  score {c.score:.6f}  -> {c.label.display}"
            )
    else:
        lines.append("  none")
    lines += ["", f"Diagnosis: {report.overall_label.display}", ""]
    return "\n".join(lines)


# --- synthetic corpus ------------------------------------------------------

_REF_LENGTH = 1200
_CDS_START = 101
_CDS_END = 1000
_GC_COUNT = 456  # exactly 38.0% of 1200
_TRANSITION = {"A": "G", "G": "A", "C": "T", "T": "C"}


def _mine_substitution_sites(bases: str) -> tuple[list, list, list]:
    """Find codons where a single transition yields each effect class.

    Returns (nonsense, silent, missense) site lists; each site is
    (position, ref_base, alt_base) with a 1-based reference position.
    Every codon contributes to at most one list, so sites never collide.
    """
    from .protein import CODON_TABLE

    nonsense, silent, missense = [], [], []
    n_codons = (_CDS_END - _CDS_START + 1) // 3
    for ci in range(n_codons):
        p = _CDS_START + 3 * ci
        codon = bases[p - 1 : p + 2]
        aa = CODON_TABLE[codon]
        if aa == "*":
            continue
        variants = []
        for off in range(3):
            alt_base = _TRANSITION[codon[off]]
            alt_codon = codon[:off] + alt_base + codon[off + 1 :]
            variants.append((off, alt_base, CODON_TABLE[alt_codon]))
        site = None
        for off, alt_base, alt_aa in variants:
            if alt_aa == "*":
                site = ("nonsense", (p + off, codon[off], alt_base))
                break
        if site is None:
            for off, alt_base, alt_aa in variants:
                if alt_aa == aa:
                    site = ("silent", (p + off, codon[off], alt_base))
                    break
        if site is None:
            for off, alt_base, alt_aa in variants:
                if alt_aa != aa:
                    site = ("missense", (p + off, codon[off], alt_base))
                    break
        if site is None:
            continue
        {"nonsense": nonsense, "silent": silent, "missense": missense}[site[0]].append(
            site[1]
        )
    return nonsense, silent, missense


def _sub(position: int, ref_base: str, alt_base: str) -> Mutation:
    return Mutation(position, MutationKind.SUBSTITUTION, ref_base, alt_base)


def make_synthetic_corpus(seed: int, out_dir: str | Path) -> dict[str, Path]:
    """Generate the deterministic desk-scale corpus.

    Writes three FASTA databases (the first holds a reference at exactly
    38.0% GC; the second a 50.0%-GC homolog so a fallback manifest can
    demonstrate gate rejection; the third a 43.0%-GC homolog), CDS
    annotations, an 18-row training file (9 malignant split 5 BRCA1 / 4
    BRCA2, 9 benign), two patient samples, and two manifests. Byte-identical
    output for a fixed seed.
    """
    out = Path(out_dir)
    rng = random.Random(seed)

    # reference with an exact base-count profile: GC = 456/1200 = 38.0%
    pool = (
        ["G"] * (_GC_COUNT // 2)
        + ["C"] * (_GC_COUNT - _GC_COUNT // 2)
        + ["A"] * ((_REF_LENGTH - _GC_COUNT) // 2)
        + ["T"] * (_REF_LENGTH - _GC_COUNT - (_REF_LENGTH - _GC_COUNT) // 2)
    )
    rng.shuffle(pool)
    ref_bases = "".join(pool)
    reference = DnaSequence(
        "BRCA1_ref", "synthetic normal gene, CDS 101..1000", ref_bases
    )

    nonsense_sites, silent_sites, missense_sites = _mine_substitution_sites(ref_bases)
    if len(nonsense_sites) < 3 or len(silent_sites) < 9 or len(missense_sites) < 4:
        raise PipelineError(
            "seed produced too few usable codons; choose another seed"
        )

    # malignant exemplars: 5 BRCA1 (3 nonsense, 1 frameshift insertion,
    # 1 missense) + 4 BRCA2 (1 frameshift deletion, 3 missense)
    fs_ins_pos = silent_sites[7][0]
    fs_del_pos = silent_sites[8][0]
    malignant = [
        ("BRCA1", _sub(*nonsense_sites[0])),
        ("BRCA1", _sub(*nonsense_sites[1])),
        ("BRCA1", _sub(*nonsense_sites[2])),
        ("BRCA1", Mutation(fs_ins_pos, MutationKind.INSERTION, "", "A")),
        ("BRCA1", _sub(*missense_sites[0])),
        ("BRCA2", Mutation(fs_del_pos, MutationKind.DELETION, ref_bases[fs_del_pos - 1], "")),
        ("BRCA2", _sub(*missense_sites[1])),
        ("BRCA2", _sub(*missense_sites[2])),
        ("BRCA2", _sub(*missense_sites[3])),
    ]
    noncoding_positions = [10, 50, 1100]
    benign = [("BRCA1", _sub(*silent_sites[i])) for i in range(6)] + [
        ("BRCA1", _sub(p, ref_bases[p - 1], _TRANSITION[ref_bases[p - 1]]))
        for p in noncoding_positions
    ]

    rows = []
    for i, (gene, mut) in enumerate(malignant, start=1):
        rows.append((f"mal-{i}", gene, mut, 1))
    for i, (gene, mut) in enumerate(benign, start=1):
        rows.append((f"ben-{i}", gene, mut, 0))

    # the mutated patient carries the first malignant mutation plus one
    # silent change; the clean patient is the reference verbatim
    patient_muts = sorted(
        [malignant[0][1], _sub(*silent_sites[6])], key=lambda m: m.position
    )
    patient_clean = DnaSequence("patient_clean", "synthetic patient sample", ref_bases)
    patient_mutated = DnaSequence(
        "patient_mutated",
        "synthetic patient sample",
        apply_mutations(reference, patient_muts).bases,
    )

    def homolog(record_id: str, extra_gc: int) -> DnaSequence:
        # flip A/T bases to G/C outside the first 200 bases, so seeds on the
        # shared prefix always anchor the homology search
        candidates = [
            i for i in range(200, _REF_LENGTH) if ref_bases[i] in "AT"
        ]
        flips = set(rng.sample(candidates, extra_gc))
        out_bases = "".join(
            ("G" if ch == "A" else "C") if i in flips else ch
            for i, ch in enumerate(ref_bases)
        )
        return DnaSequence(record_id, "synthetic homolog", out_bases)

    def decoy(record_id: str) -> DnaSequence:
        return DnaSequence(
            record_id, "synthetic decoy", "".join(rng.choice("ACGT") for _ in range(800))
        )

    ebi_homolog = homolog("BRCA1_ebi_homolog", 144)  # GC 600/1200 = 50.0%
    ensembl_homolog = homolog("BRCA1_ensembl_homolog", 60)  # GC 516/1200 = 43.0%

    db_ncbi = FastaFile((reference, decoy("decoy_n1"), decoy("decoy_n2")))
    db_ebi = FastaFile((ebi_homolog, decoy("decoy_e1"), decoy("decoy_e2")))
    db_ensembl = FastaFile((ensembl_homolog, decoy("decoy_s1"), decoy("decoy_s2")))

    try:
        out.mkdir(parents=True, exist_ok=True)
        write_fasta_path(db_ncbi, out / "db_ncbi.fasta")
        write_fasta_path(db_ebi, out / "db_ebi.fasta")
        write_fasta_path(db_ensembl, out / "db_ensembl.fasta")
        write_fasta_path(FastaFile((patient_clean,)), out / "patient_clean.fasta")
        write_fasta_path(FastaFile((patient_mutated,)), out / "patient_mutated.fasta")

        with (out / "training.jsonl").open("w", encoding="utf-8") as fh:
            for row_id, gene, mut, label in rows:
                effect = classify_effect(mut, reference, _CDS_START, _CDS_END)
                classified = Mutation(
                    mut.position, mut.kind, mut.ref_bases, mut.alt_bases, effect
                )
                features = encode(classified, reference)
                fh.write(
                    json.dumps(
                        {
                            "id": row_id,
                            "gene": gene,
                            "mutation": {
                                "position": mut.position,
                                "kind": mut.kind.value,
                                "ref": mut.ref_bases,
                                "alt": mut.alt_bases,
                            },
                            "features": list(features.values),
                            "label": label,
                        }
                    )
                    + "\n"
                )

        db_entries = {
            "ncbi": {"name": "ncbi", "fasta": "db_ncbi.fasta",
                     "cds": {"BRCA1_ref": [_CDS_START, _CDS_END]}},
            "ebi": {"name": "ebi", "fasta": "db_ebi.fasta",
                    "cds": {"BRCA1_ebi_homolog": [_CDS_START, _CDS_END]}},
            "ensembl": {"name": "ensembl", "fasta": "db_ensembl.fasta",
                        "cds": {"BRCA1_ensembl_homolog": [_CDS_START, _CDS_END]}},
        }
        manifest = {
            "databases": [db_entries["ncbi"], db_entries["ebi"], db_entries["ensembl"]],
            "training_data": "training.jsonl",
        }
        fallback = {
            "databases": [db_entries["ebi"], db_entries["ncbi"], db_entries["ensembl"]],
            "training_data": "training.jsonl",
        }
        (out / "manifest.json").write_text(
            json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
        )
        (out / "manifest_fallback.json").write_text(
            json.dumps(fallback, indent=2) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise IoFailureError(f"cannot write corpus to {out}: {exc}") from exc

    return {
        "manifest": out / "manifest.json",
        "manifest_fallback": out / "manifest_fallback.json",
        "db_ncbi": out / "db_ncbi.fasta",
        "db_ebi": out / "db_ebi.fasta",
        "db_ensembl": out / "db_ensembl.fasta",
        "patient_clean": out / "patient_clean.fasta",
        "patient_mutated": out / "patient_mutated.fasta",
        "training_data": out / "training.jsonl",
    }
