import { mountApp } from "./app.js";

const root = document.getElementById("app");
if (root) {
  void mountApp(root, window.location.origin);
}
