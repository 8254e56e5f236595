// Browser bootstrap: load runtime config, mount the app, start a session.

import { ApiClient, ClientConfig } from "./api.js";
import { ChatApp, buildDom } from "./app.js";
import { el } from "./view.js";

async function loadConfig(): Promise<ClientConfig> {
  const response = await fetch("./config.json");
  if (!response.ok) {
    throw new Error(`config.json: HTTP ${response.status}`);
  }
  return (await response.json()) as ClientConfig;
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) {
    throw new Error("missing #app mount point");
  }
  let config: ClientConfig;
  try {
    config = await loadConfig();
  } catch (error) {
    root.appendChild(el("div", "error-banner",
      `Cannot load config.json: ${error instanceof Error ? error.message : error}`));
    return;
  }
  const dom = buildDom(root);
  const app = new ChatApp(new ApiClient(config), dom);

  const toolbar = el("div", "toolbar");
  const reportButton = el("button", "report-button", "View report") as HTMLButtonElement;
  reportButton.addEventListener("click", () => { void app.viewReport(); });
  const restartButton = el("button", "restart-button", "New conversation") as HTMLButtonElement;
  restartButton.addEventListener("click", () => { void app.start(); });
  toolbar.appendChild(reportButton);
  toolbar.appendChild(restartButton);
  root.insertBefore(toolbar, dom.report);

  await app.start();
}

void boot();
