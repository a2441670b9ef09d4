import { FoldPlanClient } from "./api.js";
import { Dashboard } from "./app.js";

const base = (window as { FOLDPLAN_BASE?: string }).FOLDPLAN_BASE ?? "http://127.0.0.1:8000";
const root = document.getElementById("app");
if (root) {
  new Dashboard(root, new FoldPlanClient(base));
}
