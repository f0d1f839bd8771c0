import "./styles.css";
import { initApp } from "./app";

const root = document.getElementById("app");
if (root) {
  void initApp(root);
}
