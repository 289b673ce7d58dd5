import { HttpClient } from "./api.js";
import { createApp } from "./app.js";

const service = new URLSearchParams(location.search).get("service") ?? "";
createApp(document.getElementById("app")!, new HttpClient(service));
