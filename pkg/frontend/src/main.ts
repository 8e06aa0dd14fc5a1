import { ApiClient } from "./api.js";
import { App } from "./app.js";

// Entry point for the served page; the canvas id comes from the URL hash
// so several boards can share one server.
const root = document.getElementById("app");
if (root) {
  const canvasId = window.location.hash.replace(/^#/, "") || "default";
  const app = new App(root, new ApiClient(), { canvasId });
  void app.load();
}
