import { makeAllMain, reportFailure } from "../cli.js";

makeAllMain(process.argv.slice(2)).catch(reportFailure);
