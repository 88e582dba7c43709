/** Page bootstrap: pick the service address and mount the explorer.
 *
 * The service defaults to port 8000 on the page's host; a `service`
 * query parameter overrides it (and survives state updates, since the
 * session writer leaves unrelated parameters alone).
 */

import { ServiceClient } from "./api.js";
import { ExplorerApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const base =
  params.get("service") ?? `http://${window.location.hostname || "127.0.0.1"}:8000`;

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app mount point");
}
const app = new ExplorerApp(root, new ServiceClient(base), window);
void app.start();
