import { HttpEngineApi } from "./api.js";
import { Session } from "./state.js";
import { View } from "./ui.js";

const api = new HttpEngineApi("");
let view: View;
const session = new Session(api, 10, () => view.render());
session.restoreCommitted(View.restoreCommitted());
view = new View(session, document.getElementById("app")!);
view.render();
void session.refreshStats();
