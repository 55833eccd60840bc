import { ApiClient } from "./api.js";
import { DmConsole } from "./controller.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? "";

const root = document.querySelector<HTMLElement>("#app");
if (!root) throw new Error("missing #app mount point");

const ui = new DmConsole(new ApiClient(base), root);
void ui.mount();
