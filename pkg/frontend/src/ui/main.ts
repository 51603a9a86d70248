import { initApp } from "./app";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app element");
}
initApp(root);
