// DOM builders. Every piece of user or server text lands in textContent,
// never innerHTML, so transcripts are injection-safe by construction.
export const BANNER_LABELS = {
    none: "No elevated risk",
    elevated: "Elevated risk — review transcript",
    high: "High risk — immediate professional referral",
};
export function el(tag, className, text) {
    const node = document.createElement(tag);
    if (className) {
        node.className = className;
    }
    if (text !== undefined) {
        node.textContent = text;
    }
    return node;
}
export function scoreBadge(score) {
    return el("span", "score-badge", score.toFixed(2));
}
export function messageBubble(role, text, score) {
    const row = el("div", `msg msg-${role}`);
    const bubble = el("div", "bubble", text);
    row.appendChild(bubble);
    if (role === "user" && score !== undefined) {
        row.appendChild(scoreBadge(score));
    }
    return row;
}
export function renderBanner(banner, aggregate) {
    const level = aggregate ? aggregate.level : "none";
    banner.className = `risk-banner banner-${level}`;
    banner.textContent = BANNER_LABELS[level];
}
export function renderErrorBanner(banner, message, retryable, onRetry) {
    banner.className = "error-banner";
    banner.textContent = "";
    banner.appendChild(el("span", "error-text", message));
    if (retryable) {
        const button = el("button", "retry-button", "Retry");
        button.addEventListener("click", onRetry);
        banner.appendChild(button);
    }
}
export function clearNode(node) {
    node.textContent = "";
}
export function renderReport(container, report) {
    clearNode(container);
    if (report === null) {
        container.appendChild(el("p", "report-empty", "No report available."));
        return;
    }
    const flaggedIndexes = new Set(report.flagged.map((f) => f.transcript_index));
    const probabilities = new Map(report.flagged.map((f) => [f.transcript_index, f.probability]));
    const header = el("div", `report-header banner-${report.aggregate.level}`);
    header.appendChild(el("span", "report-level", `Risk level: ${report.aggregate.level}`));
    header.appendChild(el("span", "report-action", report.recommended_action));
    container.appendChild(header);
    const list = el("div", "report-transcript");
    report.transcript.forEach((entry, index) => {
        const flagged = flaggedIndexes.has(index);
        const row = el("div", `report-row report-${entry.role}${flagged ? " flagged" : ""}`);
        row.appendChild(el("span", "report-text", entry.text));
        if (flagged) {
            const probability = probabilities.get(index);
            row.appendChild(el("span", "flag-probability", probability === undefined ? "" : probability.toFixed(2)));
        }
        list.appendChild(row);
    });
    container.appendChild(list);
    const meta = el("div", "report-meta");
    meta.appendChild(el("span", "report-flag-count", `${report.flagged.length} flagged message(s)`));
    meta.appendChild(el("span", "report-checksum", `model ${report.model_checksum}`));
    container.appendChild(meta);
}
