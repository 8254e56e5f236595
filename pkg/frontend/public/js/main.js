// Browser bootstrap: load runtime config, mount the app, start a session.
import { ApiClient } from "./api.js";
import { ChatApp, buildDom } from "./app.js";
import { el } from "./view.js";
async function loadConfig() {
    const response = await fetch("./config.json");
    if (!response.ok) {
        throw new Error(`config.json: HTTP ${response.status}`);
    }
    return (await response.json());
}
async function boot() {
    const root = document.getElementById("app");
    if (!root) {
        throw new Error("missing #app mount point");
    }
    let config;
    try {
        config = await loadConfig();
    }
    catch (error) {
        root.appendChild(el("div", "error-banner", `Cannot load config.json: ${error instanceof Error ? error.message : error}`));
        return;
    }
    const dom = buildDom(root);
    const app = new ChatApp(new ApiClient(config), dom);
    const toolbar = el("div", "toolbar");
    const reportButton = el("button", "report-button", "View report");
    reportButton.addEventListener("click", () => { void app.viewReport(); });
    const restartButton = el("button", "restart-button", "New conversation");
    restartButton.addEventListener("click", () => { void app.start(); });
    toolbar.appendChild(reportButton);
    toolbar.appendChild(restartButton);
    root.insertBefore(toolbar, dom.report);
    await app.start();
}
void boot();
