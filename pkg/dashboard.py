import json
from pathlib import Path

import streamlit as st

# Relative report paths resolve against the repository root
project_root = Path(__file__).parent

from components.errors import CCCIError
from components.evaluator.report import load_report
from components.report_view import display_comparison, display_headline, display_scripts
from components.theme import apply_dark_theme


def read_report(path_text):
    """Load a report file, reporting problems in the page."""
    if not path_text:
        return None
    path = Path(path_text)
    if not path.is_absolute():
        path = project_root / path
    if not path.is_file():
        st.warning(f"Report not found: {path}")
        return None
    try:
        return load_report(path)
    except (CCCIError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        st.error(f"Cannot read report {path.name}: {e}")
        return None


def main():
    st.set_page_config(
        page_title="CCCI evaluation reports",
        layout="wide",
        initial_sidebar_state="expanded"
    )
    apply_dark_theme()

    with st.sidebar:
        st.title("📊 Reports")
        ccci_path = st.text_input("CCCI report", "report.json")
        original_path = st.text_input("Original prompt report (optional)", "report.original.json")
        st.markdown("---")
        st.caption("Reports are written by `python ccci.py eval --out FILE [--ablation]`.")

    report = read_report(ccci_path)
    if report is None:
        st.info("Choose a report file in the sidebar.")
        return

    original = read_report(original_path) if original_path else None
    tabs = ["📈 Scores", "📄 Scripts"] + (["⚖️ Comparison"] if original is not None else [])
    tab_views = st.tabs(tabs)

    with tab_views[0]:
        display_headline(report)
        if original is not None:
            display_headline(original)
    with tab_views[1]:
        display_scripts(report)
    if original is not None:
        with tab_views[2]:
            display_comparison(original, report)


if __name__ == "__main__":
    main()
