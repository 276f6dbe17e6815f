"""Self-contained static page: the rendered paragraph next to its data, with
hover-to-highlight provenance. Embeds the wire payload; no build step."""

from __future__ import annotations

import html

from . import jsonio

_STYLE = """
body { font-family: Georgia, serif; margin: 2rem auto; max-width: 72rem; }
.layout { display: flex; gap: 2.5rem; align-items: flex-start; }
.tables { flex: 1; font-family: Helvetica, Arial, sans-serif; font-size: 0.85rem; }
.doc { flex: 1.3; line-height: 1.7; font-size: 1.05rem; }
table { border-collapse: collapse; margin-bottom: 1.5rem; }
caption { text-align: left; font-weight: bold; padding-bottom: 0.3rem; }
td, th { border: 1px solid #ccc; padding: 0.3rem 0.6rem; }
.frag { background: #eef4ff; border-bottom: 2px solid #7aa2e8; cursor: pointer; }
.frag.hovered { background: #ffd54d; }
.frag.linked { background: #ffeeb0; }
td.hovered { background: #ffd54d; }
"""

_SCRIPT = """
const wire = JSON.parse(document.getElementById('wire-data').textContent);
const byId = {};
for (const f of wire.fragments) byId[f.id] = f;
const linked = {};
for (const [a, b] of wire.groups) {
  (linked[a] = linked[a] || []).push(b);
  (linked[b] = linked[b] || []).push(a);
}
function cellElements(cell) {
  return Array.from(document.querySelectorAll('td[data-ds]')).filter(el =>
    el.dataset.ds === cell.dataset &&
    Number(el.dataset.row) === cell.row &&
    el.dataset.col === cell.field);
}
function setHighlight(id, on) {
  const frag = byId[id];
  if (!frag) return;
  document.querySelectorAll('[data-frag="' + id + '"]').forEach(
    el => el.classList.toggle('hovered', on));
  for (const other of linked[id] || [])
    document.querySelectorAll('[data-frag="' + other + '"]').forEach(
      el => el.classList.toggle('linked', on));
  for (const cell of frag.cells)
    cellElements(cell).forEach(el => el.classList.toggle('hovered', on));
}
document.querySelectorAll('.frag').forEach(el => {
  const id = Number(el.dataset.frag);
  el.addEventListener('mouseenter', () => setHighlight(id, true));
  el.addEventListener('mouseleave', () => setHighlight(id, false));
});
"""


def _paragraph_html(wire: dict) -> str:
    text = wire["text"]
    out: list[str] = []
    pos = 0
    for frag in sorted(wire["fragments"], key=lambda f: f["start"]):
        out.append(html.escape(text[pos:frag["start"]]))
        out.append(f'<span class="frag" data-frag="{frag["id"]}">'
                   f'{html.escape(frag["text"])}</span>')
        pos = frag["end"]
    out.append(html.escape(text[pos:]))
    return "".join(out)


def _tables_html(wire: dict) -> str:
    out: list[str] = []
    for name, rows in wire["datasets"].items():
        if not rows:
            continue
        columns = list(rows[0].keys())
        out.append(f"<table><caption>{html.escape(name)}</caption><tr>")
        out.extend(f"<th>{html.escape(col)}</th>" for col in columns)
        out.append("</tr>")
        for i, row in enumerate(rows):
            out.append("<tr>")
            for col in columns:
                cell = jsonio.dumps(row[col], indent=None).strip('"')
                out.append(
                    f'<td data-ds="{html.escape(name, quote=True)}" data-row="{i}" '
                    f'data-col="{html.escape(col, quote=True)}">{html.escape(cell)}</td>')
            out.append("</tr>")
        out.append("</table>")
    return "".join(out)


def render_page(wire: dict, title: str = "Transparent document") -> str:
    return f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{html.escape(title)}</title>
<style>{_STYLE}</style>
</head>
<body>
<div class="layout">
  <div class="tables">{_tables_html(wire)}</div>
  <div class="doc">{_paragraph_html(wire)}</div>
</div>
<script id="wire-data" type="application/json">{jsonio.dumps(wire, indent=None)}</script>
<script>{_SCRIPT}</script>
</body>
</html>
"""
