"""Streamlit widgets for evaluation reports."""

import plotly.express as px
import streamlit as st

from components.evaluator.report import HEADLINE, EvaluationReport, comparison_frame
from components.theme import PLOT_LAYOUT

LABELS = {
    "B4": "BLEU-4",
    "CB": "CodeBLEU",
    "ES": "Edit Similarity",
    "BP": "Build Pass",
}


def display_headline(report: EvaluationReport):
    """One metric card per headline score."""
    st.subheader(f"{report.model_name} · {report.prompt_mode} prompt · {report.corpus_size} scripts")
    columns = st.columns(len(HEADLINE))
    for column, (short, value) in zip(columns, report.headline().items()):
        with column:
            st.metric(LABELS[short], f"{value:.1f}")
    if report.failed_count:
        st.warning(f"{report.failed_count} script(s) failed before scoring and count as zero")


def display_scripts(report: EvaluationReport):
    frame = report.frame()
    st.dataframe(
        frame,
        use_container_width=True,
        hide_index=True,
        column_config={
            "script_id": "Script",
            "build_pass": st.column_config.CheckboxColumn("Build pass"),
            "failed": st.column_config.CheckboxColumn("Failed"),
        },
    )

    fig = px.bar(
        frame,
        x="script_id",
        y="codebleu",
        color="build_pass",
        title="CodeBLEU per script",
        labels={"script_id": "Script", "codebleu": "CodeBLEU", "build_pass": "Build pass"},
        hover_data={"bleu4": ":.3f", "edit_similarity": ":.3f"},
    )
    fig.update_layout(xaxis_tickangle=-45, height=480, yaxis_range=[0, 1], **PLOT_LAYOUT)
    st.plotly_chart(fig, use_container_width=True)


def display_comparison(original: EvaluationReport, ccci: EvaluationReport):
    """Original vs CCCI prompt, per headline metric."""
    frame = comparison_frame(original, ccci)
    st.dataframe(frame.rename(index=LABELS), use_container_width=True)

    long = frame[["Original", "CCCI"]].rename(index=LABELS).reset_index().melt(
        id_vars="metric", var_name="prompt", value_name="score"
    )
    fig = px.bar(
        long,
        x="metric",
        y="score",
        color="prompt",
        barmode="group",
        title="Original vs CCCI prompt",
        labels={"metric": "", "score": "Score (%)"},
    )
    fig.update_layout(height=420, **PLOT_LAYOUT)
    st.plotly_chart(fig, use_container_width=True)
