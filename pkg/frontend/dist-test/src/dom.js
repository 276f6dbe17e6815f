/** DOM rendering: paragraph with fragment spans, the data grid, the session
 * badge, and the authoring controls. Hovered and linked fragments use two
 * distinguishable styles; provenance cells light up in the grid. */
const ACTION_LABELS = {
    select: "Interpret selection",
    approve: "Approve",
    reject: "Reject",
    revise_goal: "Revise goal",
};
export function renderParagraph(doc, model) {
    const container = document.createElement("div");
    container.className = "doc";
    const text = doc.text;
    let position = 0;
    const fragments = [...doc.fragments].sort((a, b) => a.start - b.start);
    for (const fragment of fragments) {
        if (fragment.start > position) {
            container.appendChild(document.createTextNode(text.slice(position, fragment.start)));
        }
        const span = document.createElement("span");
        span.className = "frag";
        span.dataset.frag = String(fragment.id);
        span.textContent = text.slice(fragment.start, fragment.end);
        if (model.hover?.fragmentId === fragment.id)
            span.classList.add("hovered");
        if (model.linkedFragmentIds.has(fragment.id))
            span.classList.add("linked");
        span.addEventListener("mouseenter", () => void model.hoverFragment(fragment.id));
        span.addEventListener("mouseleave", () => model.unhover());
        container.appendChild(span);
        position = fragment.end;
    }
    container.appendChild(document.createTextNode(text.slice(position)));
    return container;
}
export function renderTables(doc, model) {
    const container = document.createElement("div");
    container.className = "tables";
    const highlighted = model.highlightedCellKeys;
    for (const [name, rows] of Object.entries(doc.datasets)) {
        if (rows.length === 0)
            continue;
        const table = document.createElement("table");
        const caption = document.createElement("caption");
        caption.textContent = name;
        table.appendChild(caption);
        const columns = Object.keys(rows[0]);
        const header = document.createElement("tr");
        for (const column of columns) {
            const th = document.createElement("th");
            th.textContent = column;
            header.appendChild(th);
        }
        table.appendChild(header);
        rows.forEach((row, index) => {
            const tr = document.createElement("tr");
            for (const column of columns) {
                const td = document.createElement("td");
                td.textContent = String(row[column]);
                const key = `${name}${index}${column}`;
                if (highlighted.has(key))
                    td.classList.add("hovered");
                tr.appendChild(td);
            }
            table.appendChild(tr);
        });
        container.appendChild(table);
    }
    return container;
}
export function renderControls(model) {
    const bar = document.createElement("div");
    bar.className = "controls";
    const badge = document.createElement("span");
    badge.className = `badge state-${model.stateBadge}`;
    badge.textContent = model.stateBadge.replace(/_/g, " ");
    bar.appendChild(badge);
    const enabled = new Set(model.enabledActions);
    for (const action of Object.keys(ACTION_LABELS)) {
        const button = document.createElement("button");
        button.textContent = ACTION_LABELS[action];
        button.disabled = !enabled.has(action);
        button.dataset.action = action;
        button.addEventListener("click", () => {
            if (action === "select") {
                const span = currentSelectionSpan();
                if (span)
                    void model.act("select", span);
            }
            else {
                void model.act(action);
            }
        });
        bar.appendChild(button);
    }
    if (model.session?.state === "mismatch_decision") {
        const detail = document.createElement("p");
        detail.className = "mismatch";
        detail.textContent =
            `synthesized a different value: "${model.session.sPrime}" ` +
                `(target was "${model.session.target}")`;
        bar.appendChild(detail);
    }
    if (model.lastError) {
        const error = document.createElement("p");
        error.className = "error";
        error.textContent = model.lastError;
        bar.appendChild(error);
    }
    return bar;
}
/** Map the browser text selection inside the paragraph onto document offsets. */
function currentSelectionSpan() {
    const selection = window.getSelection();
    if (!selection || selection.isCollapsed)
        return null;
    const range = selection.getRangeAt(0);
    const doc = document.querySelector(".doc");
    if (!doc || !doc.contains(range.commonAncestorContainer))
        return null;
    const probe = range.cloneRange();
    probe.selectNodeContents(doc);
    probe.setEnd(range.startContainer, range.startOffset);
    const start = probe.toString().length;
    const length = range.toString().length;
    return length > 0 ? { start, end: start + length } : null;
}
export function renderApp(root, model) {
    root.textContent = "";
    if (!model.document)
        return;
    root.appendChild(renderControls(model));
    const layout = document.createElement("div");
    layout.className = "layout";
    layout.appendChild(renderTables(model.document, model));
    layout.appendChild(renderParagraph(model.document, model));
    root.appendChild(layout);
}
/** Side-by-side comparison of two document states over their own tables. */
export function renderComparison(root, left, right, model) {
    root.textContent = "";
    const layout = document.createElement("div");
    layout.className = "layout compare";
    for (const doc of [left, right]) {
        const pane = document.createElement("div");
        pane.className = "pane";
        pane.appendChild(renderTables(doc, model));
        pane.appendChild(renderParagraph(doc, model));
        layout.appendChild(pane);
    }
    root.appendChild(layout);
}
