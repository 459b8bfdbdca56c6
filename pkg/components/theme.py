import streamlit as st

__all__ = ['apply_dark_theme', 'PLOT_LAYOUT']

THEME = {
    "bg_color": "#0e1117",
    "text_color": "white",
    "sidebar_bg": "#1a1d23",
    "card_bg": "#25282e",
    "border_color": "rgba(255, 255, 255, 0.1)",
}

# Shared plotly layout for the report charts
PLOT_LAYOUT = dict(
    plot_bgcolor='rgba(0,0,0,0)',
    paper_bgcolor='rgba(0,0,0,0)',
    font={'color': THEME["text_color"], 'size': 12},
    title_font={'size': 20},
    hoverlabel=dict(
        bgcolor="rgba(0,0,0,0.8)",
        font=dict(color="white", size=13),
        bordercolor="white",
    ),
    xaxis=dict(gridcolor='rgba(128,128,128,0.1)', color='white'),
    yaxis=dict(gridcolor='rgba(128,128,128,0.1)', color='white'),
)


def apply_dark_theme():
    """Dark background, sidebar and tab styling for the report dashboard."""
    css = f"""
    <style>
    body, .stApp {{
        background-color: {THEME["bg_color"]};
        color: {THEME["text_color"]};
    }}

    .stSidebar, .stSidebarContent {{
        background-color: {THEME["sidebar_bg"]} !important;
        color: {THEME["text_color"]} !important;
    }}

    section[data-testid="stSidebar"] .block-container {{
        padding: 1rem !important;
    }}

    /* Metric cards */
    div[data-testid="stMetric"] {{
        background-color: {THEME["card_bg"]};
        border: 1px solid {THEME["border_color"]};
        border-radius: 6px;
        padding: 0.75rem 1rem;
    }}

    .stTabs [data-baseweb="tab-list"] {{
        gap: 8px;
        padding: 0.5rem 0;
    }}

    .stTabs [data-baseweb="tab"] {{
        height: 44px;
        background-color: {THEME["sidebar_bg"]} !important;
        border: 1px solid {THEME["border_color"]};
        border-radius: 5px;
        padding: 0 20px;
        color: {THEME["text_color"]};
    }}

    .stTabs [aria-selected="true"] {{
        background-color: rgba(255, 255, 255, 0.1) !important;
        border-color: rgba(255, 255, 255, 0.4) !important;
        font-weight: 600;
    }}

    .stTabs [data-baseweb="tab-highlight"] {{
        display: none;
    }}
    </style>
    """

    st.markdown(css, unsafe_allow_html=True)
