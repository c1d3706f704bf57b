"""
Regmark - Streamlit UI
Read-only explorer for regression graphs: structure, pairwise statements,
separation queries and Gaussian checks.
"""

import streamlit as st
import pandas as pd
from pathlib import Path
import sys
import os

# Add src to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.analyzers.markov_properties import ALL_PROPERTIES, get_markov_generator, report_to_records
from src.analyzers.separation import get_separation_checker
from src.core.errors import RegressionGraphError
from src.core.regression_graph import RegressionGraph
from src.core.statements import format_node_set
from src.parsers.graph_parser import get_graph_parser, graph_hash
from src.parsers.statement_parser import parse_node_set
from src.stats.gaussian_oracle import get_gaussian_oracle


DATA_DIR = Path(__file__).resolve().parent.parent / "data"


# ==========================================
# 🎨 UI CONFIGURATION & CSS
# ==========================================

st.set_page_config(
    page_title="Regmark",
    page_icon="🕸️",
    layout="wide",
    initial_sidebar_state="expanded"
)

st.markdown("""
    <style>
    .section-title {
        font-size: 1.3rem;
        font-weight: 600;
        margin: 1.2rem 0 0.6rem 0;
    }
    .status-ok { color: #10b981; font-weight: 600; }
    .status-bad { color: #ef4444; font-weight: 600; }
    </style>
""", unsafe_allow_html=True)


# ==========================================
# 🧩 RENDER HELPERS
# ==========================================

def render_structure(graph: RegressionGraph):
    """Components, partition and canonical ordering."""
    u, v = graph.partition
    ordering = graph.valid_ordering()

    col1, col2, col3 = st.columns(3)
    col1.metric("Nodes", len(graph.nodes))
    col2.metric("Edges", len(graph.edges))
    col3.metric("Missing edges", len(graph.uncoupled_pairs()))

    st.markdown(f"**Response set:** {format_node_set(u)} &nbsp; **Context set:** {format_node_set(v)}")
    st.markdown(f"**Valid ordering:** `{ordering.to_text()}`")
    st.dataframe(
        pd.DataFrame([
            {"component": format_node_set(c.nodes), "kind": c.kind, "role": c.role}
            for c in graph.components()
        ]),
        use_container_width=True,
        hide_index=True,
    )


def render_statements(graph: RegressionGraph):
    """Conditioning sets of every missing edge under the four properties."""
    report = get_markov_generator().statement_report(graph)
    if report.empty:
        st.info("The graph is complete: no pairwise statements.")
        return
    rows = report_to_records(report)
    for row in rows:
        for column in ("past", "anteriors", "joint_parents", "parents_of_lower"):
            row[column] = format_node_set(row[column])
    st.dataframe(pd.DataFrame(rows), use_container_width=True, hide_index=True)


def render_separation(graph: RegressionGraph):
    """Ad-hoc separation query."""
    col1, col2, col3 = st.columns(3)
    a_text = col1.text_input("A", value="2")
    b_text = col2.text_input("B", value="4")
    c_text = col3.text_input("C", value="5,6,8,9")
    if not st.button("Check separation"):
        return
    try:
        result = get_separation_checker().m_separated(
            graph, parse_node_set(a_text), parse_node_set(b_text), parse_node_set(c_text)
        )
    except RegressionGraphError as exc:
        st.error(str(exc))
        return
    if result.separated:
        st.markdown('<span class="status-ok">separated</span>', unsafe_allow_html=True)
    else:
        route = " - ".join(str(n) for n in result.witness)
        st.markdown(f'<span class="status-bad">connected</span> via {route}', unsafe_allow_html=True)


def render_gaussian(graph: RegressionGraph):
    """Generate a model and check every pairwise statement on it."""
    seed = st.number_input("Seed", min_value=0, value=1, step=1)
    if not st.button("Generate model"):
        return
    oracle = get_gaussian_oracle()
    generator = get_markov_generator()
    with st.spinner("Generating covariance matrix..."):
        model = oracle.generate_model(graph, seed=int(seed))

    rows = []
    for prop in ALL_PROPERTIES:
        report = oracle.verify_statements(model, generator.pairwise_statements(graph, prop))
        rows.append({"property": prop.value, "statements": report["total"], "holding": report["holding"]})
    st.dataframe(pd.DataFrame(rows), use_container_width=True, hide_index=True)

    genericity = oracle.check_genericity(model, graph)
    st.markdown(f"Dependent coupled pairs: **{genericity['dependent']} / {genericity['pairs']}**")
    st.dataframe(
        pd.DataFrame(model.sigma, index=model.nodes, columns=model.nodes).round(4),
        use_container_width=True,
    )


# ==========================================
# 🚀 MAIN APP
# ==========================================

def main():
    """Main application logic."""

    parser = get_graph_parser()

    with st.sidebar:
        st.header("Graph")

        if 'input_mode' not in st.session_state:
            st.session_state.input_mode = "Example file"

        st.session_state.input_mode = st.radio(
            "Select Input Method",
            ["Example file", "Paste Text"],
            index=0 if st.session_state.input_mode == "Example file" else 1,
            label_visibility="collapsed",
            key="input_method_selector"
        )

        if st.session_state.input_mode == "Example file":
            examples = sorted(p.name for p in DATA_DIR.glob("*.rg"))
            choice = st.selectbox("Example", examples, index=examples.index("figure1.rg") if "figure1.rg" in examples else 0)
            graph_text = (DATA_DIR / choice).read_text(encoding="utf-8") if choice else ""
        else:
            graph_text = st.text_area("Graph text", height=260, placeholder="1 ~~ 2\n3 -> 1\n4 -- 5")

    st.title("Regmark")

    if not graph_text.strip():
        st.info("Choose an example or paste a graph.")
        return

    try:
        graph = parser.parse(graph_text)
    except RegressionGraphError as exc:
        st.error(f"Graph parsing failed: {exc}")
        return

    violations = graph.validate()
    if violations:
        st.markdown('<span class="status-bad">Not a regression graph</span>', unsafe_allow_html=True)
        for violation in violations:
            st.write(f"- `{violation.code}`: {violation}")
        return
    st.caption(f"sha256 {graph_hash(graph)[:16]}")

    tab1, tab2, tab3, tab4 = st.tabs(["Structure", "Pairwise statements", "Separation", "Gaussian check"])
    with tab1:
        render_structure(graph)
    with tab2:
        render_statements(graph)
    with tab3:
        render_separation(graph)
    with tab4:
        render_gaussian(graph)


if __name__ == "__main__":
    main()
