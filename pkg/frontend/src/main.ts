import { createApi } from "./api";
import { mount } from "./app";

mount(document, createApi(""));
